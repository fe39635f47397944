//! User typology: Pearson correlations, principal component analysis on the
//! correlation matrix (cyclic Jacobi eigensolver) and least-squares regression.

use std::collections::HashMap;

use thiserror::Error;

use crate::dataset::{ActivityVector, Dataset, UserId};
use crate::scalar::Scalar;

/// Response of the default reputation regression.
pub const REPUTATION_RESPONSE: &str = "favorites_received";

/// Regressors of the default reputation regression: photos posted, comments made,
/// favorites granted, group memberships and contacts made.
pub const REPUTATION_REGRESSORS: [&str; 5] = ["photos", "comments_posted", "favorites_given", "groups", "contacts_out"];

/// Convergence target for the off-diagonal Frobenius norm.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TypologyError {
    #[error("need at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("column {name:?} has {got} rows, expected {expected}")]
    RaggedColumn { name: String, got: usize, expected: usize },
    #[error("column {0:?} contains a non-finite value")]
    NonFinite(String),
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
    #[error("column {0:?} has zero variance")]
    ZeroVarianceColumn(String),
    #[error("requested {requested} components, matrix has {available} variables")]
    InvalidComponents { requested: usize, available: usize },
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    ConvergenceFailure(usize),
    #[error("matrix columns do not match the fitted columns")]
    ColumnMismatch,
    #[error("design matrix is singular")]
    SingularDesign,
    #[error("response column {0:?} has zero variance")]
    DegenerateResponse(String),
    #[error("need more than {needed} rows for this regression, got {got}")]
    TooFewObservations { needed: usize, got: usize },
}

/// Rows are observations (users), columns are named variables. Column-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableMatrix<T> {
    names: Vec<String>,
    columns: Vec<Vec<T>>,
    n_rows: usize,
}

impl<T: Scalar> VariableMatrix<T> {
    pub fn from_columns(names: Vec<String>, columns: Vec<Vec<T>>) -> Result<Self, TypologyError> {
        assert_eq!(names.len(), columns.len(), "one name per column");
        let n_rows = columns.first().map_or(0, Vec::len);
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n_rows {
                return Err(TypologyError::RaggedColumn { name: name.clone(), got: col.len(), expected: n_rows });
            }
            if col.iter().any(|v| !v.is_finite()) {
                return Err(TypologyError::NonFinite(name.clone()));
            }
        }
        if n_rows < 2 {
            return Err(TypologyError::TooFewRows(n_rows));
        }
        Ok(Self { names, columns, n_rows })
    }

    pub fn from_rows(names: Vec<String>, rows: &[Vec<T>]) -> Result<Self, TypologyError> {
        let columns = (0..names.len()).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        Self::from_columns(names, columns)
    }

    /// The eight activity counts of each listed user (all users when `users` is
    /// `None`), optionally transformed by `ln(1 + x)`.
    pub fn from_activity(d: &Dataset, users: Option<&[UserId]>, log1p: bool) -> Result<Self, TypologyError> {
        let all = d.activity_vectors();
        let selected: Vec<ActivityVector> = match users {
            None => all.into_iter().map(|(_, a)| a).collect(),
            Some(ids) => {
                let by_id: HashMap<UserId, ActivityVector> = all.into_iter().collect();
                ids.iter().filter_map(|u| by_id.get(u).copied()).collect()
            }
        };
        let transform = |c: u64| {
            let x = T::from_u64_lossy(c);
            if log1p { x.ln_1p() } else { x }
        };
        let columns = (0..8).map(|j| selected.iter().map(|a| transform(a.to_array()[j])).collect()).collect();
        Self::from_columns(ActivityVector::NAMES.iter().map(|s| s.to_string()).collect(), columns)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.columns[j]
    }

    pub fn column_index(&self, name: &str) -> Result<usize, TypologyError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| TypologyError::UnknownColumn(name.to_string()))
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    fn mean(&self, j: usize) -> T {
        self.columns[j].iter().copied().sum::<T>() / T::from_count(self.n_rows)
    }

    /// Sum of squared deviations from the mean.
    fn centered_ss(&self, j: usize, mean: T) -> T {
        self.columns[j].iter().map(|&x| (x - mean) * (x - mean)).sum()
    }

    /// Column means and sample standard deviations; fails on a constant column.
    fn moments(&self) -> Result<(Vec<T>, Vec<T>), TypologyError> {
        let mut means = Vec::with_capacity(self.n_cols());
        let mut sds = Vec::with_capacity(self.n_cols());
        for j in 0..self.n_cols() {
            let m = self.mean(j);
            let ss = self.centered_ss(j, m);
            if ss <= T::zero() {
                return Err(TypologyError::ZeroVarianceColumn(self.names[j].clone()));
            }
            means.push(m);
            sds.push((ss / T::from_count(self.n_rows - 1)).sqrt());
        }
        Ok((means, sds))
    }
}

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymmetricMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    fn off_diagonal_norm(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.n {
            for j in i + 1..self.n {
                s += self.get(i, j) * self.get(i, j);
            }
        }
        (s + s).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix<T> {
    pub names: Vec<String>,
    pub values: SymmetricMatrix<T>,
}

/// Pearson correlation of every column pair. Each unordered pair is computed
/// once, so the result is exactly symmetric.
pub fn correlation_matrix<T: Scalar>(m: &VariableMatrix<T>) -> Result<CorrelationMatrix<T>, TypologyError> {
    let p = m.n_cols();
    let mut means = Vec::with_capacity(p);
    let mut ss = Vec::with_capacity(p);
    for j in 0..p {
        let mean = m.mean(j);
        let s = m.centered_ss(j, mean);
        if s <= T::zero() {
            return Err(TypologyError::ZeroVarianceColumn(m.names[j].clone()));
        }
        means.push(mean);
        ss.push(s);
    }
    let values = SymmetricMatrix::from_fn(p, |a, b| {
        if a == b {
            return T::one();
        }
        let sxy: T = m.columns[a]
            .iter()
            .zip(&m.columns[b])
            .map(|(&x, &y)| (x - means[a]) * (y - means[b]))
            .sum();
        (sxy / (ss[a] * ss[b]).sqrt()).max(-T::one()).min(T::one())
    });
    Ok(CorrelationMatrix { names: m.names.clone(), values })
}

/// Eigendecomposition of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    /// Descending.
    pub values: Vec<T>,
    /// `vectors[c]` is the unit eigenvector of `values[c]`, signed so that its
    /// largest-magnitude entry is positive.
    pub vectors: Vec<Vec<T>>,
    pub sweeps: usize,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// [`JACOBI_TOLERANCE`] (or a few ulps of the matrix norm for low precision
/// scalars), at most [`JACOBI_MAX_SWEEPS`] sweeps.
pub fn jacobi_eigen<T: Scalar>(a: &SymmetricMatrix<T>) -> Result<EigenDecomposition<T>, TypologyError> {
    let n = a.dim();
    let mut a = a.data.clone();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let frob = a.iter().map(|&x| x * x).sum::<T>().sqrt();
    let tol = T::lit(JACOBI_TOLERANCE).max(T::lit(8.0) * T::epsilon() * frob);
    let off = |a: &[T]| SymmetricMatrix { n, data: a.to_vec() }.off_diagonal_norm();

    let mut sweeps = 0;
    while off(&a) >= tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(TypologyError::ConvergenceFailure(JACOBI_MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (apq + apq);
                let t = tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt());
                let t = if tau == T::zero() { T::one() } else { t };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].partial_cmp(&a[i * n + i]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&c| {
            let mut col: Vec<T> = (0..n).map(|k| v[k * n + c]).collect();
            let lead = col
                .iter()
                .enumerate()
                .fold(0, |best, (k, x)| if x.abs() > col[best].abs() { k } else { best });
            if col[lead] < T::zero() {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            col
        })
        .collect();
    Ok(EigenDecomposition { values, vectors, sweeps })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult<T> {
    pub names: Vec<String>,
    pub means: Vec<T>,
    /// Sample standard deviations (n - 1 denominator).
    pub std_devs: Vec<T>,
    /// All eigenvalues of the correlation matrix, descending.
    pub eigenvalues: Vec<T>,
    /// Unit eigenvectors of the retained components.
    pub components: Vec<Vec<T>>,
    /// `loadings[variable][component]` = eigenvector entry x sqrt(eigenvalue).
    pub loadings: Vec<Vec<T>>,
    /// Eigenvalue / p for each retained component.
    pub variance_explained: Vec<T>,
}

impl<T: Scalar> PcaResult<T> {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }
}

/// PCA of the standardized columns of `m`, keeping `n_components` components.
pub fn pca<T: Scalar>(m: &VariableMatrix<T>, n_components: usize) -> Result<PcaResult<T>, TypologyError> {
    let p = m.n_cols();
    if n_components == 0 || n_components > p {
        return Err(TypologyError::InvalidComponents { requested: n_components, available: p });
    }
    let (means, std_devs) = m.moments()?;
    let corr = correlation_matrix(m)?;
    let eig = jacobi_eigen(&corr.values)?;
    let pf = T::from_count(p);
    let components: Vec<Vec<T>> = eig.vectors[..n_components].to_vec();
    let loadings = (0..p)
        .map(|j| {
            (0..n_components)
                .map(|c| components[c][j] * eig.values[c].max(T::zero()).sqrt())
                .collect()
        })
        .collect();
    let variance_explained = eig.values[..n_components].iter().map(|&l| l / pf).collect();
    Ok(PcaResult {
        names: m.names.clone(),
        means,
        std_devs,
        eigenvalues: eig.values,
        components,
        loadings,
        variance_explained,
    })
}

/// Component scores: standardized rows times retained eigenvectors, `scores[row][component]`.
pub fn pca_project<T: Scalar>(r: &PcaResult<T>, m: &VariableMatrix<T>) -> Result<Vec<Vec<T>>, TypologyError> {
    if m.names != r.names {
        return Err(TypologyError::ColumnMismatch);
    }
    let scores = (0..m.n_rows)
        .map(|i| {
            let z: Vec<T> = (0..m.n_cols()).map(|j| (m.columns[j][i] - r.means[j]) / r.std_devs[j]).collect();
            r.components.iter().map(|v| v.iter().zip(&z).map(|(&a, &b)| a * b).sum()).collect()
        })
        .collect();
    Ok(scores)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OlsResult<T> {
    pub response: String,
    pub regressors: Vec<String>,
    pub intercept: T,
    pub coefficients: Vec<T>,
    pub r_squared: T,
    /// Residual sum of squares.
    pub rss: T,
    pub n: usize,
}

impl<T: Scalar> OlsResult<T> {
    /// Fitted values for the rows of `m` (which must carry the regressor columns).
    pub fn predict(&self, m: &VariableMatrix<T>) -> Result<Vec<T>, TypologyError> {
        let cols = self
            .regressors
            .iter()
            .map(|n| m.column_index(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((0..m.n_rows)
            .map(|i| {
                self.intercept
                    + cols
                        .iter()
                        .zip(&self.coefficients)
                        .map(|(&j, &b)| b * m.columns[j][i])
                        .sum::<T>()
            })
            .collect())
    }

    pub fn residuals(&self, m: &VariableMatrix<T>) -> Result<Vec<T>, TypologyError> {
        let y = m.column(m.column_index(&self.response)?);
        Ok(self.predict(m)?.into_iter().zip(y).map(|(f, &y)| y - f).collect())
    }
}

/// Relative pivot threshold on the unit-diagonal normal equations.
const SINGULAR_PIVOT: f64 = 1e-10;

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
fn solve_partial_pivot<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>, TypologyError> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))
            .expect("non-empty range");
        if !(a[pivot][col].abs() > T::lit(SINGULAR_PIVOT)) {
            return Err(TypologyError::SingularDesign);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..n {
                let sub = f * a[col][k];
                a[row][k] -= sub;
            }
            let sub = f * b[col];
            b[row] -= sub;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let tail: T = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// Least squares with intercept.
///
/// The normal equations are formed on centered regressors and equilibrated to a
/// unit diagonal before elimination; a pivot below `1e-10` flags a singular design.
pub fn ols<T: Scalar>(m: &VariableMatrix<T>, response: &str, regressors: &[&str]) -> Result<OlsResult<T>, TypologyError> {
    let yj = m.column_index(response)?;
    let xj = regressors.iter().map(|r| m.column_index(r)).collect::<Result<Vec<_>, _>>()?;
    let (n, p) = (m.n_rows, xj.len());
    if n <= p + 1 {
        return Err(TypologyError::TooFewObservations { needed: p + 1, got: n });
    }
    let y_mean = m.mean(yj);
    let sst = m.centered_ss(yj, y_mean);
    if sst <= T::zero() {
        return Err(TypologyError::DegenerateResponse(response.to_string()));
    }
    let x_means: Vec<T> = xj.iter().map(|&j| m.mean(j)).collect();
    let centered: Vec<Vec<T>> = xj
        .iter()
        .zip(&x_means)
        .map(|(&j, &mu)| m.columns[j].iter().map(|&x| x - mu).collect())
        .collect();
    let yc: Vec<T> = m.columns[yj].iter().map(|&y| y - y_mean).collect();
    let dot = |a: &[T], b: &[T]| a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>();

    let scale: Vec<T> = centered.iter().map(|c| dot(c, c).sqrt()).collect();
    if scale.iter().any(|&s| s <= T::zero()) {
        return Err(TypologyError::SingularDesign);
    }
    let a: Vec<Vec<T>> = (0..p)
        .map(|i| (0..p).map(|k| dot(&centered[i], &centered[k]) / (scale[i] * scale[k])).collect())
        .collect();
    let b: Vec<T> = (0..p).map(|i| dot(&centered[i], &yc) / scale[i]).collect();
    let coefficients: Vec<T> = solve_partial_pivot(a, b)?
        .into_iter()
        .zip(&scale)
        .map(|(c, &s)| c / s)
        .collect();
    let intercept = y_mean - coefficients.iter().zip(&x_means).map(|(&b, &mu)| b * mu).sum::<T>();

    let mut result = OlsResult {
        response: response.to_string(),
        regressors: regressors.iter().map(|s| s.to_string()).collect(),
        intercept,
        coefficients,
        r_squared: T::zero(),
        rss: T::zero(),
        n,
    };
    let rss: T = result.residuals(m)?.iter().map(|&r| r * r).sum();
    result.rss = rss;
    result.r_squared = (T::one() - rss / sst).max(T::zero()).min(T::one());
    Ok(result)
}

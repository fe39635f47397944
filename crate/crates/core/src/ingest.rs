//! Tab-separated interchange format.
//!
//! A dataset directory holds nine UTF-8 files, one per [`Table`], each with a
//! mandatory header row, LF line endings and one record per line:
//!
//! | file            | columns                        |
//! |-----------------|--------------------------------|
//! | users.tsv       | user_id, is_pro (0/1)          |
//! | photos.tsv      | photo_id, owner_id, title      |
//! | phototags.tsv   | photo_id, tag                  |
//! | contacts.tsv    | from_id, to_id                 |
//! | comments.tsv    | comment_id, author_id, photo_id|
//! | favorites.tsv   | user_id, photo_id              |
//! | groups.tsv      | group_id, name                 |
//! | memberships.tsv | user_id, group_id              |
//! | pool.tsv        | photo_id, group_id             |
//!
//! Text fields may not contain tabs, carriage returns or newlines.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dataset::*;

impl Table {
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Table::Users => &["user_id", "is_pro"],
            Table::Photos => &["photo_id", "owner_id", "title"],
            Table::PhotoTags => &["photo_id", "tag"],
            Table::Contacts => &["from_id", "to_id"],
            Table::Comments => &["comment_id", "author_id", "photo_id"],
            Table::Favorites => &["user_id", "photo_id"],
            Table::Groups => &["group_id", "name"],
            Table::Memberships => &["user_id", "group_id"],
            Table::Pool => &["photo_id", "group_id"],
        }
    }

    fn header(self) -> String {
        self.columns().join("\t")
    }
}

/// One anomaly found while loading. `line` is 1-based; `None` for file-level issues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub file: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{}: {}", self.file, line, self.message),
            None => write!(f, "{}: {}", self.file, self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
    /// Records per table that made it into the dataset.
    pub counts: BTreeMap<Table, usize>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{} error(s) in dataset, first: {}", .0.errors.len(), .0.errors[0])]
    Invalid(ValidationReport),
    #[error("{table}: cannot save {message}")]
    Unrepresentable { table: Table, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> IngestError + '_ {
    move |source| IngestError::Io { path: path.to_path_buf(), source }
}

fn parse_id(field: &str, column: &str) -> Result<u64, String> {
    if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("column {column}: expected a nonnegative integer, got {field:?}"));
    }
    field.parse().map_err(|_| format!("column {column}: integer out of range: {field:?}"))
}

fn parse_row(table: Table, fields: &[&str], records: &mut Records) -> Result<(), String> {
    let cols = table.columns();
    if fields.len() != cols.len() {
        return Err(format!("expected {} columns, found {}", cols.len(), fields.len()));
    }
    let id = |i: usize| parse_id(fields[i], cols[i]);
    match table {
        Table::Users => {
            let is_pro = match fields[1] {
                "0" => false,
                "1" => true,
                other => return Err(format!("column is_pro: expected 0 or 1, got {other:?}")),
            };
            records.users.push(User { id: UserId(id(0)?), is_pro });
        }
        Table::Photos => records.photos.push(Photo {
            id: PhotoId(id(0)?),
            owner: UserId(id(1)?),
            title: fields[2].to_string(),
        }),
        Table::PhotoTags => records.tags.push(TagAssignment { photo: PhotoId(id(0)?), tag: fields[1].to_string() }),
        Table::Contacts => records.contacts.push(ContactEdge { from: UserId(id(0)?), to: UserId(id(1)?) }),
        Table::Comments => records.comments.push(Comment {
            id: CommentId(id(0)?),
            author: UserId(id(1)?),
            photo: PhotoId(id(2)?),
        }),
        Table::Favorites => records.favorites.push(Favorite { user: UserId(id(0)?), photo: PhotoId(id(1)?) }),
        Table::Groups => records.groups.push(Group { id: GroupId(id(0)?), name: fields[1].to_string() }),
        Table::Memberships => records.memberships.push(Membership { user: UserId(id(0)?), group: GroupId(id(1)?) }),
        Table::Pool => records.pool.push(PoolEntry { photo: PhotoId(id(0)?), group: GroupId(id(1)?) }),
    }
    Ok(())
}

/// Records read from a directory, with the source line of every record.
#[derive(Debug, Default)]
pub struct ParsedTables {
    pub records: Records,
    pub lines: BTreeMap<Table, Vec<usize>>,
    pub report: ValidationReport,
}

/// Parses every table file in `dir` without integrity checks.
///
/// Malformed rows are skipped and recorded as errors; a missing file is an
/// empty table plus a warning. Only I/O failures other than absence abort.
pub fn read_tables(dir: &Path) -> Result<ParsedTables, IngestError> {
    let mut out = ParsedTables::default();
    for table in Table::ALL {
        let path = dir.join(table.file_name());
        let file = table.file_name().to_string();
        let issue = |line: Option<usize>, message: String| Issue { file: file.clone(), line, message };
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == io::ErrorKind::NotFound => {
                out.report.warnings.push(issue(None, "file missing, table treated as empty".into()));
                continue;
            }
            Err(e) => return Err(io_err(&path)(e)),
        };
        let lines_out = out.lines.entry(table).or_default();
        let mut body = bytes.as_slice();
        if body.last() == Some(&b'\n') {
            body = &body[..body.len() - 1];
        }
        if body.is_empty() && bytes.is_empty() {
            out.report.errors.push(issue(Some(1), "missing header row".into()));
            continue;
        }
        for (i, raw) in body.split(|&b| b == b'\n').enumerate() {
            let line_no = i + 1;
            let Ok(line) = std::str::from_utf8(raw) else {
                out.report.errors.push(issue(Some(line_no), "invalid UTF-8".into()));
                if line_no == 1 {
                    break;
                }
                continue;
            };
            if line_no == 1 {
                if line != table.header() {
                    out.report.errors.push(issue(
                        Some(1),
                        format!("bad header {line:?}, expected {:?}", table.header()),
                    ));
                    break;
                }
                continue;
            }
            if line.contains('\r') {
                out.report.errors.push(issue(Some(line_no), "carriage return in row".into()));
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match parse_row(table, &fields, &mut out.records) {
                Ok(()) => lines_out.push(line_no),
                Err(message) => out.report.errors.push(issue(Some(line_no), message)),
            }
        }
    }
    Ok(out)
}

/// Loads and validates a dataset directory.
///
/// In strict mode any parse or integrity error fails the load with the full
/// report; in lenient mode offending rows are dropped and listed in the report.
pub fn load(dir: &Path, mode: BuildMode) -> Result<(Dataset, ValidationReport), IngestError> {
    let ParsedTables { records, lines, mut report } = read_tables(dir)?;
    if mode == BuildMode::Strict && !report.errors.is_empty() {
        return Err(IngestError::Invalid(report));
    }
    let to_issue = |v: Violation| Issue {
        file: v.table.file_name().to_string(),
        line: lines.get(&v.table).and_then(|l| l.get(v.index)).copied(),
        message: v.message,
    };
    match Dataset::build(records, mode) {
        Ok((dataset, build)) => {
            report.errors.extend(build.dropped.into_iter().map(to_issue));
            report.warnings.extend(build.warnings.into_iter().map(to_issue));
            for table in Table::ALL {
                report.counts.insert(table, dataset.records().len(table));
            }
            Ok((dataset, report))
        }
        Err(DatasetError::Integrity(violations)) => {
            report.errors.extend(violations.into_iter().map(to_issue));
            Err(IngestError::Invalid(report))
        }
        Err(other) => unreachable!("build only reports integrity errors: {other}"),
    }
}

fn check_text(table: Table, what: &str, text: &str) -> Result<(), IngestError> {
    if text.contains(['\t', '\n', '\r']) {
        return Err(IngestError::Unrepresentable {
            table,
            message: format!("{what} {text:?}: contains a tab or line break"),
        });
    }
    Ok(())
}

fn write_rows<W: Write>(w: &mut W, table: Table, r: &Records) -> Result<(), IngestError> {
    let path = PathBuf::from(table.file_name());
    let e = io_err(&path);
    let res: io::Result<()> = (|| {
        match table {
            Table::Users => {
                for u in &r.users {
                    writeln!(w, "{}\t{}", u.id, u8::from(u.is_pro))?;
                }
            }
            Table::Photos => {
                for p in &r.photos {
                    writeln!(w, "{}\t{}\t{}", p.id, p.owner, p.title)?;
                }
            }
            Table::PhotoTags => {
                for t in &r.tags {
                    writeln!(w, "{}\t{}", t.photo, t.tag)?;
                }
            }
            Table::Contacts => {
                for c in &r.contacts {
                    writeln!(w, "{}\t{}", c.from, c.to)?;
                }
            }
            Table::Comments => {
                for c in &r.comments {
                    writeln!(w, "{}\t{}\t{}", c.id, c.author, c.photo)?;
                }
            }
            Table::Favorites => {
                for f in &r.favorites {
                    writeln!(w, "{}\t{}", f.user, f.photo)?;
                }
            }
            Table::Groups => {
                for g in &r.groups {
                    writeln!(w, "{}\t{}", g.id, g.name)?;
                }
            }
            Table::Memberships => {
                for m in &r.memberships {
                    writeln!(w, "{}\t{}", m.user, m.group)?;
                }
            }
            Table::Pool => {
                for p in &r.pool {
                    writeln!(w, "{}\t{}", p.photo, p.group)?;
                }
            }
        }
        Ok(())
    })();
    res.map_err(e)
}

fn check_records(r: &Records) -> Result<(), IngestError> {
    for p in &r.photos {
        check_text(Table::Photos, "title", &p.title)?;
    }
    for t in &r.tags {
        check_text(Table::PhotoTags, "tag", &t.tag)?;
    }
    for g in &r.groups {
        check_text(Table::Groups, "name", &g.name)?;
    }
    Ok(())
}

/// Writes `records` as they are (no sorting, no validation of references).
pub fn write_records(r: &Records, dir: &Path) -> Result<(), IngestError> {
    check_records(r)?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for table in Table::ALL {
        let path = dir.join(table.file_name());
        let mut w = BufWriter::new(File::create(&path).map_err(io_err(&path))?);
        writeln!(w, "{}", table.header()).map_err(io_err(&path))?;
        write_rows(&mut w, table, r)?;
        w.flush().map_err(io_err(&path))?;
    }
    Ok(())
}

/// Appends `records` to the table files in `dir`, creating files with their
/// header when absent.
pub fn append_records(r: &Records, dir: &Path) -> Result<(), IngestError> {
    check_records(r)?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for table in Table::ALL {
        let path = dir.join(table.file_name());
        let fresh = !path.exists();
        if !fresh && r.len(table) == 0 {
            continue;
        }
        let file = OpenOptions::new().create(true).append(true).open(&path).map_err(io_err(&path))?;
        let mut w = BufWriter::new(file);
        if fresh {
            writeln!(w, "{}", table.header()).map_err(io_err(&path))?;
        }
        write_rows(&mut w, table, r)?;
        w.flush().map_err(io_err(&path))?;
    }
    Ok(())
}

/// Saves `d` in canonical form: rows ascending by primary id(s), deterministic bytes.
pub fn save(d: &Dataset, dir: &Path) -> Result<(), IngestError> {
    write_records(d.records(), dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn write(dir: &Path, name: &str, body: &str) {
        fs::write(dir.join(name), body).unwrap();
    }

    #[test]
    fn only_users_file_loads_with_warnings() {
        let dir = tempdir().unwrap();
        write(dir.path(), "users.tsv", "user_id\tis_pro\n1\t0\n2\t1\n");
        let (d, report) = load(dir.path(), BuildMode::Strict).unwrap();
        assert_eq!(d.users().len(), 2);
        assert!(d.users()[1].is_pro);
        assert!(d.photos().is_empty());
        assert_eq!(report.warnings.len(), 8);
        assert!(report.errors.is_empty());
        assert_eq!(report.counts[&Table::Users], 2);
    }

    #[test]
    fn wrong_column_count_reports_line() {
        let dir = tempdir().unwrap();
        write(dir.path(), "users.tsv", "user_id\tis_pro\n1\t0\n2\t0\n");
        write(dir.path(), "contacts.tsv", "from_id\tto_id\n1\t2\n2\t1\t7\n");
        let Err(IngestError::Invalid(report)) = load(dir.path(), BuildMode::Strict) else {
            panic!("expected invalid");
        };
        assert_eq!(report.errors.len(), 1);
        assert_eq!(report.errors[0].file, "contacts.tsv");
        assert_eq!(report.errors[0].line, Some(3));
    }

    #[test]
    fn lenient_load_skips_bad_rows() {
        let dir = tempdir().unwrap();
        write(dir.path(), "users.tsv", "user_id\tis_pro\n1\t0\nx\t0\n2\t2\n3\t1\n");
        let (d, report) = load(dir.path(), BuildMode::Lenient).unwrap();
        assert_eq!(d.users().len(), 2);
        let lines: Vec<_> = report.errors.iter().map(|e| e.line).collect();
        assert_eq!(lines, vec![Some(3), Some(4)]);
    }

    #[test]
    fn integrity_errors_carry_source_lines() {
        let dir = tempdir().unwrap();
        write(dir.path(), "users.tsv", "user_id\tis_pro\n1\t0\n");
        write(dir.path(), "photos.tsv", "photo_id\towner_id\ttitle\n5\t1\tok\n6\t9\tdangling\n");
        let Err(IngestError::Invalid(report)) = load(dir.path(), BuildMode::Strict) else {
            panic!("expected invalid");
        };
        assert_eq!(report.errors[0].to_string(), "photos.tsv:3: photo 6 owned by unknown user 9");
    }

    #[test]
    fn bad_header_and_signs_rejected() {
        let dir = tempdir().unwrap();
        write(dir.path(), "users.tsv", "id\tpro\n1\t0\n");
        write(dir.path(), "groups.tsv", "group_id\tname\n+4\tx\n");
        let Err(IngestError::Invalid(report)) = load(dir.path(), BuildMode::Strict) else {
            panic!("expected invalid");
        };
        assert_eq!(report.errors.len(), 2);
        assert_eq!(report.errors[0].line, Some(1));
        assert_eq!(report.errors[1].line, Some(2));
    }

    #[test]
    fn empty_dataset_saves_headers_only() {
        let dir = tempdir().unwrap();
        save(&Dataset::empty(), dir.path()).unwrap();
        for table in Table::ALL {
            let body = fs::read_to_string(dir.path().join(table.file_name())).unwrap();
            assert_eq!(body, format!("{}\n", table.header()));
        }
    }

    #[test]
    fn tab_in_title_rejected_at_save() {
        let r = Records {
            users: vec![User { id: UserId(1), is_pro: false }],
            photos: vec![Photo { id: PhotoId(1), owner: UserId(1), title: "a\tb".into() }],
            ..Default::default()
        };
        let d = Dataset::from_records(r).unwrap();
        let dir = tempdir().unwrap();
        assert!(matches!(save(&d, dir.path()), Err(IngestError::Unrepresentable { table: Table::Photos, .. })));
    }

    #[test]
    fn append_creates_then_extends() {
        let dir = tempdir().unwrap();
        let a = Records { users: vec![User { id: UserId(1), is_pro: false }], ..Default::default() };
        let b = Records { users: vec![User { id: UserId(2), is_pro: true }], ..Default::default() };
        append_records(&a, dir.path()).unwrap();
        append_records(&b, dir.path()).unwrap();
        let body = fs::read_to_string(dir.path().join("users.tsv")).unwrap();
        assert_eq!(body, "user_id\tis_pro\n1\t0\n2\t1\n");
    }
}

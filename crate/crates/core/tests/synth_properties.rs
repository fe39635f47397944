use photosocial::metrics::{self, Functionality, UserClass};
use photosocial::synth::{generate, CountLaw, SynthConfig, SynthError};
use photosocial::PhotoId;

#[test]
fn same_seed_same_dataset() {
    let cfg = SynthConfig::with_users(1500, 9);
    assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
    let other = SynthConfig::with_users(1500, 10);
    assert_ne!(generate(&cfg).unwrap(), generate(&other).unwrap());
}

#[test]
fn pro_share_and_inequality_at_ten_thousand_users() {
    let d = generate(&SynthConfig::with_users(10_000, 42)).unwrap();
    let pros = d.users().iter().filter(|u| u.is_pro).count();
    let share = pros as f64 / d.users().len() as f64;
    assert!((share - 0.037).abs() <= 0.005, "pro share {share}");

    let g = |class| metrics::gini(&metrics::functionality_distribution::<f64>(&d, Functionality::Photos, class)).unwrap();
    let (all, pro) = (g(UserClass::All), g(UserClass::Pro));
    assert!(all > pro, "gini all {all} <= pro {pro}");

    let stats = metrics::functionality_stats::<f64>(&d);
    let photos = &stats.rows[0];
    assert!(photos.mean_active.pro.unwrap() > photos.mean_active.non_pro.unwrap());
    assert!(photos.pct_zero.pro.unwrap() < photos.pct_zero.non_pro.unwrap());
}

#[test]
fn skipped_ids_match_the_estimator() {
    let mut cfg = SynthConfig::with_users(5_000, 7);
    cfg.id_skip_prob = 0.33;
    let d = generate(&cfg).unwrap();
    let ids: Vec<PhotoId> = d.photos().iter().map(|p| p.id).collect();
    assert!(ids.len() >= 100_000, "only {} ids", ids.len());
    let c = metrics::id_coverage_bound::<f64>(&ids).unwrap();
    assert!((c.private_upper_bound - 0.33).abs() <= 0.01, "{}", c.private_upper_bound);
    assert!(c.min_id.0 >= cfg.first_photo_id);
}

#[test]
fn no_skips_gives_contiguous_ids() {
    let mut cfg = SynthConfig::with_users(500, 1);
    cfg.id_skip_prob = 0.0;
    cfg.first_photo_id = 1;
    let d = generate(&cfg).unwrap();
    for (i, p) in d.photos().iter().enumerate() {
        assert_eq!(p.id, PhotoId(i as u64 + 1));
    }
}

#[test]
fn pool_photos_belong_to_members() {
    let d = generate(&SynthConfig::with_users(2000, 5)).unwrap();
    assert!(!d.pool().is_empty());
    for e in d.pool() {
        let owner = d.photo(e.photo).unwrap().owner;
        assert!(d.groups_of(owner).any(|g| g == e.group));
    }
}

#[test]
fn tiny_and_empty_corpora() {
    assert!(generate(&SynthConfig::with_users(0, 1)).unwrap().users().is_empty());
    let d = generate(&SynthConfig::with_users(1, 1)).unwrap();
    assert_eq!(d.users().len(), 1);
    assert!(d.contacts().is_empty());
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = [
        SynthConfig { pro_fraction: 1.5, ..SynthConfig::default() },
        SynthConfig { id_skip_prob: 1.0, ..SynthConfig::default() },
        SynthConfig { photos_pro: CountLaw::new(0.1, 1.0, 0), ..SynthConfig::default() },
        SynthConfig { tag_popularity_exponent: f64::NAN, ..SynthConfig::default() },
        SynthConfig { tag_vocabulary: 0, ..SynthConfig::default() },
    ];
    for cfg in bad {
        assert!(matches!(generate(&cfg), Err(SynthError::InvalidConfig(_))), "{cfg:?}");
    }
}

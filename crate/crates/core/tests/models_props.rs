mod common;

use proptest::prelude::*;

use codemix::corpus::Sentiment;
use codemix::models::{self, argmax, Classifier, ModelKind, TrainConfig};
use codemix::vectorize::SparseVector;

/// Non-negative sparse rows of a fixed width with every class present.
fn problem() -> impl Strategy<Value = (Vec<SparseVector>, Vec<Sentiment>)> {
    (2..8usize).prop_flat_map(|d| {
        prop::collection::vec((prop::collection::vec(prop_oneof![3 => Just(0.0), 2 => 0.0..3.0f64], d), 0..3usize), 3..20).prop_map(|rows| {
            let x = rows.iter().map(|(r, _)| SparseVector::from_dense(r)).collect();
            let y = rows.iter().enumerate().map(|(i, (_, l))| Sentiment::ALL[if i < 3 { i } else { *l }]).collect();
            (x, y)
        })
    })
}

fn config(kind: ModelKind, seed: u64) -> TrainConfig {
    let mut cfg = TrainConfig::new(kind);
    cfg.epochs = 10;
    cfg.batch_size = 4;
    cfg.seed = seed;
    cfg
}

proptest! {
    #[test]
    fn predict_is_argmax_of_scores((x, y) in problem(), kind in prop::sample::select(ModelKind::ALL.to_vec()), seed in any::<u64>()) {
        let clf = models::fit(&x, &y, &config(kind, seed)).unwrap();
        for xi in &x {
            let scores = clf.predict_scores(xi).unwrap();
            prop_assert_eq!(clf.predict(xi).unwrap(), Sentiment::ALL[argmax(&scores)]);
        }
    }

    #[test]
    fn training_is_deterministic((x, y) in problem(), kind in prop::sample::select(ModelKind::ALL.to_vec()), seed in any::<u64>()) {
        let a = models::fit(&x, &y, &config(kind, seed)).unwrap();
        let b = models::fit(&x, &y, &config(kind, seed)).unwrap();
        prop_assert_eq!(a.to_text(), b.to_text());
    }

    #[test]
    fn text_round_trip_preserves_predictions((x, y) in problem(), kind in prop::sample::select(ModelKind::ALL.to_vec())) {
        let clf = models::fit(&x, &y, &config(kind, 1)).unwrap();
        let back = Classifier::from_text(&clf.to_text()).unwrap();
        for xi in &x {
            prop_assert_eq!(back.predict_scores(xi).unwrap(), clf.predict_scores(xi).unwrap());
        }
    }

    #[test]
    fn mnb_prediction_is_invariant_to_count_scaling((x, y) in problem(), k in 2..6u32) {
        let cfg = config(ModelKind::Mnb, 0);
        let clf = models::fit(&x, &y, &cfg).unwrap();
        for xi in &x {
            let scaled = xi.scaled(k as f64);
            let base = clf.predict_scores(xi).unwrap();
            let log_prior = match &clf { Classifier::NaiveBayes(m) => m.log_prior().to_vec(), _ => unreachable!() };
            // scores minus the prior scale linearly with k
            let s = clf.predict_scores(&scaled).unwrap();
            for c in 0..3 {
                let expect = log_prior[c] + k as f64 * (base[c] - log_prior[c]);
                prop_assert!((s[c] - expect).abs() <= 1e-9 * (1.0 + expect.abs()));
            }
        }
    }

    #[test]
    fn mnb_matches_oracle((x, y) in problem(), alpha in 0.1..2.0f64) {
        let mut cfg = config(ModelKind::Mnb, 0);
        cfg.mnb_alpha = alpha;
        let Classifier::NaiveBayes(m) = models::fit(&x, &y, &cfg).unwrap() else { unreachable!() };
        let dense: Vec<Vec<f64>> = x.iter().map(|v| v.to_dense()).collect();
        let labels: Vec<usize> = y.iter().map(|s| s.index()).collect();
        let (prior, ll) = common::mnb_oracle(&dense, &labels, 3, alpha);
        prop_assert!((m.log_prior().iter().map(|p| p.exp()).sum::<f64>() - 1.0).abs() < 1e-9);
        for c in 0..3 {
            prop_assert!((m.log_likelihood_row(c).iter().map(|p| p.exp()).sum::<f64>() - 1.0).abs() < 1e-9);
        }
        for c in 0..3 {
            prop_assert!((m.log_prior()[c] - prior[c]).abs() <= 1e-12);
            for (a, b) in m.log_likelihood_row(c).iter().zip(&ll[c]) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn fit_rejects_missing_class_and_bad_dimensions() {
    let x = vec![SparseVector::from_dense(&[1.0, 0.0]); 3];
    let y = [Sentiment::Negative, Sentiment::Negative, Sentiment::Positive];
    assert!(models::fit(&x, &y, &TrainConfig::new(ModelKind::Lr)).is_err());
    let x = vec![SparseVector::from_dense(&[1.0]), SparseVector::from_dense(&[1.0, 0.0]), SparseVector::from_dense(&[1.0])];
    let y = [Sentiment::Negative, Sentiment::Neutral, Sentiment::Positive];
    assert!(models::fit(&x, &y, &TrainConfig::new(ModelKind::Svm)).is_err());
}

#[test]
fn predict_checks_dimension() {
    let x = vec![SparseVector::from_dense(&[1.0, 0.0]), SparseVector::from_dense(&[0.0, 1.0]), SparseVector::from_dense(&[1.0, 1.0])];
    let y = [Sentiment::Negative, Sentiment::Neutral, Sentiment::Positive];
    let clf = models::fit(&x, &y, &TrainConfig::new(ModelKind::Mnb)).unwrap();
    assert!(clf.predict(&SparseVector::from_dense(&[1.0, 0.0, 0.0])).is_err());
}

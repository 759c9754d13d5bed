//! Randomized checks of the index pipeline against the brute-force oracle.

use cooc::delta::build_delta;
use cooc::oracle::oracle_lmco;
use cooc::scanner::{coverage_depth, is_properly_ordered, scan_minimal, Scanner};
use cooc::{CooccurrenceIndex, IndexOptions, QueryProfile, TokenId, Variant};
use proptest::prelude::*;

/// A string over `0..sigma` and a query set of 2..=4 distinct symbols from it.
fn instance() -> impl Strategy<Value = (Vec<TokenId>, Vec<TokenId>)> {
    (2u32..=8).prop_flat_map(|sigma| {
        let q = 2usize..=(sigma as usize).min(4);
        (
            proptest::collection::vec(0..sigma, 0..=500),
            q.prop_flat_map(move |q| proptest::sample::subsequence((0..sigma).collect::<Vec<_>>(), q)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn scanner_matches_oracle((s, q) in instance()) {
        let profile = QueryProfile::new(q.iter().copied()).unwrap();
        let mins = scan_minimal(&s, &profile);
        let oracle = oracle_lmco(&s, &q);
        prop_assert_eq!(&mins, &oracle.minimal_list);
        prop_assert!(is_properly_ordered(&mins));
        prop_assert!(coverage_depth(&mins) <= q.len());
        for m in &mins {
            prop_assert!(profile.contains(s[m.start - 1]) && profile.contains(s[m.end - 1]));
        }
    }

    #[test]
    fn lm_recurrence_between_emissions((s, q) in instance()) {
        let profile = QueryProfile::new(q.iter().copied()).unwrap();
        let mut sc = Scanner::new(&profile);
        let mut prev: Option<usize> = None;
        for &t in &s {
            let emitted = sc.push(t);
            let lm = sc.lm();
            match (prev, lm, emitted) {
                (Some(p), Some(l), None) => prop_assert_eq!(l, p + 1),
                (Some(p), Some(l), Some(_)) => prop_assert!(l <= p),
                (None, Some(_), e) => prop_assert!(e.is_some()),
                _ => {}
            }
            prop_assert_eq!(sc.recency().capacity(), q.len());
            prev = lm;
        }
    }

    #[test]
    fn delta_matches_oracle_differences((s, q) in instance()) {
        let profile = QueryProfile::new(q.iter().copied()).unwrap();
        let mins = scan_minimal(&s, &profile);
        let enc = build_delta(&mins, s.len() as u64);
        prop_assert!(enc.check().is_ok());
        prop_assert!(enc.d() <= 2 * mins.len());
        let oracle = oracle_lmco(&s, &q);
        for w in 2..=s.len() as u64 {
            let got = enc.z.binary_search(&w).map_or(0, |j| enc.delta[j]);
            prop_assert_eq!(got, oracle.delta(w), "w = {}", w);
        }
        let total: u64 = oracle.lmco_table.iter().sum();
        let expect = oracle.r1.map_or(0, |r1| s.len() - r1 + 1) as u64;
        prop_assert_eq!(total, expect);
        if let Some(&last) = enc.f.last() {
            prop_assert_eq!(last as u64, oracle.lmco(s.len() as u64));
        }
    }

    #[test]
    fn index_matches_oracle((s, q) in instance(), bucketed in any::<bool>()) {
        let variant = if bucketed { Variant::Bucketed } else { Variant::Baseline };
        let idx = CooccurrenceIndex::build(&s, &q, IndexOptions { variant, ..Default::default() }).unwrap();
        let oracle = oracle_lmco(&s, &q);
        let n = s.len() as u64;
        for w in 0..=n + 2 {
            prop_assert_eq!(idx.co(w), oracle.co(w), "co({})", w);
            prop_assert_eq!(idx.lmco(w), oracle.lmco(w), "lmco({})", w);
        }
        let table = idx.full_table();
        prop_assert!(table.iter().enumerate().all(|(i, &c)| c == idx.co(i as u64 + 1)));
        prop_assert!(table.iter().enumerate().all(|(i, &c)| c <= n - i as u64));
    }

    #[test]
    fn difference_identity_and_monotone_prefix((s, q) in instance()) {
        let idx = CooccurrenceIndex::build(&s, &q, IndexOptions::default()).unwrap();
        let n = s.len() as i64;
        let mut prefix = 0u64;
        for w in 1..=n as u64 {
            let next = prefix + idx.lmco(w);
            prop_assert!(next >= prefix);
            prefix = next;
        }
        if let Some(r1) = idx.r1() {
            let r1 = r1 as i64;
            for w in 2..=n {
                let lhs = idx.co(w as u64) as i64 - idx.co(w as u64 - 1) as i64;
                let rhs = idx.lmco(w as u64) as i64 - (w - r1).max(0) + (w - 1 - r1).max(0);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn serialization_round_trips((s, q) in instance()) {
        let idx = CooccurrenceIndex::build(&s, &q, IndexOptions::default()).unwrap();
        let back = CooccurrenceIndex::from_bytes(&idx.to_bytes()).unwrap();
        prop_assert_eq!(back, idx);
    }
}

#[test]
fn seed_has_no_effect_on_answers() {
    let s: Vec<TokenId> = (0..3000u32).map(|i| (i * 7 + i / 13) % 5).collect();
    let a = CooccurrenceIndex::build(&s, &[0, 3, 4], IndexOptions { seed: 1, ..Default::default() }).unwrap();
    let b = CooccurrenceIndex::build(&s, &[0, 3, 4], IndexOptions { seed: 2, ..Default::default() }).unwrap();
    assert_eq!(a, b);
}

use commclosure_core::parikh::{
    disambiguate, intersect_linear, intersect_simple, make_consistent, make_free, make_free_set,
    LinearSet, SemilinearSet,
};
use commclosure_core::pipeline::{run_pipeline, PipelineOptions};
use commclosure_core::NatVec;
use proptest::prelude::*;

const BOX: u64 = 10;

fn grid(k: usize) -> Vec<NatVec> {
    let mut out = vec![NatVec::zero(k)];
    for j in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=BOX).map(move |x| {
                    let mut w = v.clone();
                    w.0[j] = x;
                    w
                })
            })
            .collect();
    }
    out
}

fn small_vec(k: usize, lo: u64) -> impl Strategy<Value = NatVec> {
    proptest::collection::vec(0u64..4, k)
        .prop_filter("nonzero", move |v| v.iter().sum::<u64>() >= lo)
        .prop_map(NatVec)
}

fn linear(k: usize, max_basis: usize) -> impl Strategy<Value = LinearSet> {
    (
        small_vec(k, 0),
        proptest::collection::vec(small_vec(k, 1), 0..=max_basis),
    )
        .prop_map(|(o, b)| LinearSet::new(o, b))
}

fn free_linear(k: usize) -> impl Strategy<Value = LinearSet> {
    linear(k, k).prop_filter("free basis", LinearSet::is_free)
}

fn same_points(a: &SemilinearSet, b: &SemilinearSet, k: usize) -> Result<(), TestCaseError> {
    for p in grid(k) {
        prop_assert_eq!(a.contains(&p), b.contains(&p), "differ at {}", p);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 120, ..ProptestConfig::default() })]

    #[test]
    fn make_free_keeps_points(t in linear(2, 3)) {
        let f = make_free(&t).unwrap();
        prop_assert!(f.terms.iter().all(LinearSet::is_free));
        same_points(&f, &SemilinearSet::new(2, vec![t]), 2)?;
    }

    #[test]
    fn disambiguation_is_exact(terms in proptest::collection::vec(linear(2, 2), 1..=3)) {
        let s = SemilinearSet::new(2, terms);
        let d = disambiguate(&make_free_set(&s).unwrap()).unwrap();
        same_points(&d, &s, 2)?;
        for p in grid(2) {
            prop_assert!(d.count_representations(&p, 2) <= 1, "ambiguous at {}", p);
        }
    }

    #[test]
    fn consistency_keeps_points(terms in proptest::collection::vec(free_linear(2), 1..=3)) {
        let s = SemilinearSet::new(2, terms);
        let d = disambiguate(&s).unwrap();
        let c = make_consistent(&d).unwrap();
        same_points(&c, &s, 2)?;
    }

    #[test]
    fn intersections_agree(t in free_linear(2), u in free_linear(2)) {
        let by_solver = intersect_linear(&t, &u).unwrap();
        let by_cones = SemilinearSet::new(2, intersect_simple(&t, &u).unwrap());
        for p in grid(2) {
            let want = t.contains(&p) && u.contains(&p);
            prop_assert_eq!(by_solver.contains(&p), want, "solver at {}", p);
            prop_assert_eq!(by_cones.contains(&p), want, "cones at {}", p);
        }
    }

    #[test]
    fn three_letter_disambiguation(terms in proptest::collection::vec(free_linear(3), 1..=2)) {
        let s = SemilinearSet::new(3, terms);
        let d = disambiguate(&s).unwrap();
        same_points(&d, &s, 3)?;
    }
}

#[test]
fn verdict_ignores_union_order() {
    let parts = ["b(aa|bb)*", "(ab)*", "a(a|ab)*", "b(b|ab)*", "ab(ab)*", "(aa|bbb)*"];
    let opts = PipelineOptions::default();
    for (i, x) in parts.iter().enumerate() {
        for y in &parts[i + 1..] {
            let l = run_pipeline(&format!("{x}|{y}"), &opts).unwrap();
            let r = run_pipeline(&format!("{y}|{x}"), &opts).unwrap();
            assert_eq!(l.verdict, r.verdict, "{x} | {y}");
            assert_eq!(l.reduced, r.reduced, "{x} | {y}");
            assert_eq!(l.min_states, r.min_states, "{x} | {y}");
        }
    }
}

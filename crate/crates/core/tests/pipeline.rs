use parahoric_lab::building::{orbit_dimension_check, DepthZeroSpec};
use parahoric_lab::glq::TableCache;
use parahoric_lab::lemma::{LemmaEngine, TauFilter};
use parahoric_lab::orders::{intermediate_shapes, AffineWeylElem, BlockShape};
use proptest::prelude::*;

fn element(perm: &[usize], exps: &[i64]) -> AffineWeylElem {
    let w: Vec<String> = perm.iter().map(|p| (p + 1).to_string()).collect();
    let d: Vec<String> = exps.iter().map(i64::to_string).collect();
    format!("w:{};d:{}", w.join(","), d.join(",")).parse().unwrap()
}

#[test]
fn worked_gl2_cells_through_the_public_api() {
    let cache = TableCache::new();
    let engine = LemmaEngine::new(&cache, 2, 1, 2).unwrap();
    let iwahori = engine.shape_data(&BlockShape::new(vec![1, 1]).unwrap()).unwrap();
    let maximal = engine.shape_data(&BlockShape::new(vec![2]).unwrap()).unwrap();
    let x: AffineWeylElem = "d:0,1".parse().unwrap();
    // GL_1(F_2) is trivial, so the Iwahori has one τ and one cell per x.
    assert_eq!(engine.taus(&iwahori, TauFilter::All).unwrap().len(), 1);
    let r = engine.lemma_check(&iwahori, 0, &[0, 0], &x).unwrap();
    assert!(r.equal);
    let total: i64 = engine
        .taus(&maximal, TauFilter::All)
        .unwrap()
        .iter()
        .map(|t| engine.lemma_check(&maximal, 0, t, &x).unwrap().left.unwrap())
        .sum();
    assert_eq!(total, 2);
}

#[test]
fn orbit_counts_on_gl3_f2_faces() {
    let cache = TableCache::new();
    let engine = LemmaEngine::new(&cache, 2, 1, 3).unwrap();
    let x = element(&[1, 0, 2], &[1, 0, 0]);
    for shape in intermediate_shapes(3, 1) {
        let data = engine.shape_data(&shape).unwrap();
        let spec = DepthZeroSpec::full(&engine, &cache, &data, 0).unwrap();
        let r = orbit_dimension_check(&engine, &data, &spec, &x).unwrap();
        assert!(r.equal && r.stabilizer_fixes, "{shape}");
        assert_eq!(r.orbit_size, r.predicted_orbit_size);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_cells_balance(
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        exps in proptest::collection::vec(-2i64..=2, 3),
        shape_idx in 0usize..4,
        q in prop_oneof![Just(2u32), Just(3u32)],
    ) {
        let cache = TableCache::new();
        let engine = LemmaEngine::new(&cache, q, 1, 3).unwrap();
        let shapes = intermediate_shapes(3, 1);
        let data = engine.shape_data(&shapes[shape_idx % shapes.len()]).unwrap();
        let x = element(&perm, &exps);
        for rho in engine.cuspidals().unwrap() {
            for tau in engine.taus(&data, TauFilter::SupportOnly).unwrap() {
                let r = engine.lemma_check(&data, rho, &tau, &x).unwrap();
                prop_assert!(r.equal, "{:?}", r);
            }
        }
    }

    #[test]
    fn weyl_elements_round_trip(
        perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
        exps in proptest::collection::vec(-3i64..=3, 4),
    ) {
        let x = element(&perm, &exps);
        let back: AffineWeylElem = x.to_string().parse().unwrap();
        prop_assert_eq!(back.to_string(), x.to_string());
        prop_assert_eq!(x.e0(), 4);
    }
}

use corgal::model::{contract, random_model};
use corgal::validity::gen_formula;
use corgal::{
    pal_to_el, parse_formula, parse_model, render_formula, render_model, Agent, Checker, Stratum,
};
use proptest::prelude::*;

fn signature() -> (Vec<String>, Vec<Agent>) {
    (
        ["p", "q", "r"].map(String::from).to_vec(),
        ["a", "b", "c"].map(|a| Agent::new(a).unwrap()).to_vec(),
    )
}

fn stratum(i: u8) -> Stratum {
    [Stratum::El, Stratum::Pal, Stratum::Rgal, Stratum::Corgal][i as usize % 4]
}

proptest! {
    #[test]
    fn render_then_parse_round_trips(seed in any::<u64>(), s in 0u8..4, depth in 0usize..5) {
        let (atoms, agents) = signature();
        let f = gen_formula(seed, stratum(s), depth, &atoms, &agents);
        let text = render_formula(&f);
        let back = parse_formula(&text).unwrap();
        prop_assert_eq!(render_formula(&back), text.clone());
        // dual knowledge has no surface syntax of its own
        prop_assert_eq!(back.desugar(), f.desugar(), "{}", text);
    }

    #[test]
    fn desugar_is_idempotent_and_core(seed in any::<u64>(), depth in 0usize..5) {
        let (atoms, agents) = signature();
        let f = gen_formula(seed, Stratum::Corgal, depth, &atoms, &agents);
        let d = f.desugar();
        prop_assert!(d.is_core());
        prop_assert_eq!(d.desugar(), d.clone());
        let m = random_model(seed, 3, 3, 3);
        let c = Checker::default();
        prop_assert_eq!(c.truth_set(&m, &f).unwrap(), c.truth_set(&m, &d).unwrap());
    }

    #[test]
    fn model_document_round_trip(seed in any::<u64>(), n in 1usize..7) {
        let m = random_model(seed, n, 3, 3);
        prop_assert_eq!(parse_model(&render_model(&m)).unwrap(), m);
    }

    #[test]
    fn translation_preserves_truth(seed in any::<u64>(), n in 1usize..6) {
        let (atoms, agents) = signature();
        let f = gen_formula(seed, Stratum::Pal, 4, &atoms, &agents);
        let t = pal_to_el(&f).unwrap();
        prop_assert_eq!(t.stratum(), Stratum::El);
        let m = random_model(seed ^ 0x9e37, n, 3, 3);
        let c = Checker::default();
        prop_assert_eq!(c.truth_set(&m, &f).unwrap(), c.truth_set(&m, &t).unwrap());
    }

    #[test]
    fn contraction_preserves_truth(seed in any::<u64>(), n in 1usize..6) {
        let (atoms, agents) = signature();
        let f = gen_formula(seed, Stratum::Corgal, 3, &atoms, &agents);
        let m = random_model(seed, n, 3, 3);
        let q = contract(&m);
        let c = Checker::default();
        for w in 0..m.len() {
            prop_assert_eq!(c.eval(&m, w, &f).unwrap(), c.eval(&q.model, q.map[w], &f).unwrap());
        }
    }
}

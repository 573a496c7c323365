//! Exhaustive semantic checks of the synthesized formulas.

use std::sync::Arc;

use rankprof::formula::{synth_dist, synth_exact_word, synth_length, Assignment, Evaluator, Var};
use rankprof::{enumerate_ball, Alphabet, Word};

#[test]
fn dist_holds_exactly_at_offset_d() {
    let binary = Arc::new(Alphabet::from_chars("ab").unwrap());
    let formulas: Vec<_> = (0..=64).map(synth_dist).collect();
    for m in 0..=80usize {
        // Dist_d has no letter atoms, so its truth depends on |w| only.
        let w = Word::from_letters(&binary, (0..m).map(|i| (i % 3 == 1) as u8).collect()).unwrap();
        let mut ev = Evaluator::new(&w);
        for (d, f) in formulas.iter().enumerate() {
            let cf = ev.compile(f);
            for i in 1..=m {
                for j in 1..=m {
                    let env = Assignment::new().with(Var(0), i).with(Var(1), j);
                    assert_eq!(ev.check(&cf, &env).unwrap(), j == i + d, "m={m} d={d} i={i} j={j}");
                }
            }
        }
    }
}

#[test]
fn length_formulas_pin_length() {
    let unary = Arc::new(Alphabet::from_chars("a").unwrap());
    let formulas: Vec<_> = (0..=64).map(synth_length).collect();
    for len in 0..=70usize {
        let w = Word::parse(&unary, "a").unwrap().power(len);
        let mut ev = Evaluator::new(&w);
        for (m, f) in formulas.iter().enumerate() {
            let cf = ev.compile(f);
            assert_eq!(ev.check(&cf, &Assignment::new()).unwrap(), len == m, "m={m} |w|={len}");
        }
    }
}

#[test]
fn exact_word_formulas_identify_their_word() {
    let binary = Arc::new(Alphabet::from_chars("ab").unwrap());
    let targets: Vec<Word> = enumerate_ball(&binary, 5, 1 << 22).unwrap().collect();
    let probes: Vec<Word> = enumerate_ball(&binary, 6, 1 << 22).unwrap().collect();
    for w in &targets {
        let chi = synth_exact_word(w);
        for v in &probes {
            let mut ev = Evaluator::new(v);
            let cf = ev.compile(&chi);
            assert_eq!(ev.check(&cf, &Assignment::new()).unwrap(), v == w, "chi_{w} on {v}");
        }
    }
}

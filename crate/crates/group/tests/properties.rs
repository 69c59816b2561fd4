use std::collections::BTreeMap;

use cogrowth_group::{apply_generator, evaluate_word, GroupSpec, NormalForm, SignedGenerator};
use proptest::prelude::*;

fn specs() -> Vec<GroupSpec> {
    [
        "G(2,2)",
        "G(2,3)",
        "G(3,4)",
        "G(2,2,2)",
        "G(3,4,5)",
        "B3-standard",
        "B3-axa",
    ]
    .iter()
    .map(|s| GroupSpec::parse(s).unwrap())
    .collect()
}

fn letters(spec: &GroupSpec) -> Vec<SignedGenerator> {
    spec.alphabet()
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..7usize, prop::collection::vec(0..10usize, 0..max_len))
}

fn to_word(spec: &GroupSpec, raw: &[usize]) -> Vec<SignedGenerator> {
    let alphabet = letters(spec);
    raw.iter().map(|&r| alphabet[r % alphabet.len()]).collect()
}

fn inverse_word(w: &[SignedGenerator]) -> Vec<SignedGenerator> {
    w.iter().rev().map(|g| g.inv()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn round_trip((s, raw) in word_strategy(40)) {
        let spec = &specs()[s];
        let nf = evaluate_word(spec, &to_word(spec, &raw)).unwrap();
        for g in letters(spec) {
            let (next, _) = apply_generator(spec, &nf, g).unwrap();
            let (back, _) = apply_generator(spec, &next, g.inv()).unwrap();
            prop_assert_eq!(&back, &nf);
        }
    }

    #[test]
    fn word_times_inverse_is_identity((s, raw) in word_strategy(50)) {
        let spec = &specs()[s];
        let w = to_word(spec, &raw);
        let mut full = w.clone();
        full.extend(inverse_word(&w));
        prop_assert_eq!(evaluate_word(spec, &full).unwrap(), NormalForm::identity(spec));
    }

    #[test]
    fn every_step_keeps_a_valid_suffix((s, raw) in word_strategy(200)) {
        let spec = &specs()[s];
        let mut nf = NormalForm::identity(spec);
        for g in to_word(spec, &raw) {
            let d = nf.apply(spec, g).unwrap();
            prop_assert!(nf.is_valid(spec));
            if !matches!(spec, GroupSpec::BraidAxa) {
                prop_assert!((-1..=1).contains(&d));
            } else {
                prop_assert!((-2..=2).contains(&d));
            }
        }
    }

    #[test]
    fn inverting_letters_negates_winding((s, raw) in word_strategy(30)) {
        let spec = &specs()[s];
        if spec.periods().is_none() {
            return Ok(());
        }
        let w = to_word(spec, &raw);
        let flipped: Vec<SignedGenerator> = w.iter().map(|g| g.inv()).collect();
        let a = evaluate_word(spec, &w).unwrap();
        let b = evaluate_word(spec, &flipped).unwrap();
        prop_assert_eq!(a.in_delta_subgroup(), b.in_delta_subgroup());
        if a.in_delta_subgroup() {
            prop_assert_eq!(a.m, -b.m);
        }
    }
}

/// 2x2 matrices over Z[t, 1/t]; the reduced Burau representation of B3 is faithful.
type Laurent = BTreeMap<i32, i64>;
type Mat = [[Laurent; 2]; 2];

fn lmul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn ladd(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = a.clone();
    for (e, c) in b {
        *out.entry(*e).or_insert(0) += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn mmul(a: &Mat, b: &Mat) -> Mat {
    let mut out: Mat = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = ladd(&lmul(&a[i][0], &b[0][j]), &lmul(&a[i][1], &b[1][j]));
        }
    }
    out
}

fn mono(e: i32, c: i64) -> Laurent {
    Laurent::from([(e, c)])
}

fn burau(g: SignedGenerator) -> Mat {
    let zero = Laurent::new();
    match (g.index, g.inverse) {
        (1, false) => [[mono(1, -1), mono(0, 1)], [zero.clone(), mono(0, 1)]],
        (1, true) => [[mono(-1, -1), mono(-1, 1)], [zero.clone(), mono(0, 1)]],
        (_, false) => [[mono(0, 1), zero.clone()], [mono(1, 1), mono(1, -1)]],
        (_, true) => [[mono(0, 1), zero.clone()], [mono(0, 1), mono(-1, -1)]],
    }
}

fn burau_word(w: &[SignedGenerator]) -> Mat {
    let id: Mat = [[mono(0, 1), Laurent::new()], [Laurent::new(), mono(0, 1)]];
    w.iter().fold(id, |acc, &g| mmul(&acc, &burau(g)))
}

/// Rewrites an axa word in the standard generators via `x = ab`.
fn axa_to_standard(w: &[SignedGenerator]) -> Vec<SignedGenerator> {
    let a = SignedGenerator::positive(1);
    let b = SignedGenerator::positive(2);
    let mut out = Vec::new();
    for g in w {
        match (g.index, g.inverse) {
            (1, false) => out.push(a),
            (1, true) => out.push(a.inv()),
            (_, false) => out.extend([a, b]),
            (_, true) => out.extend([b.inv(), a.inv()]),
        }
    }
    out
}

#[test]
fn burau_inverse_matrices_are_inverse() {
    for g in GroupSpec::BraidStandard.alphabet() {
        let m = burau_word(&[g, g.inv()]);
        assert_eq!(m, burau_word(&[]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn standard_normal_form_separates_exactly_like_burau(
        r1 in prop::collection::vec(0..4usize, 0..9),
        r2 in prop::collection::vec(0..4usize, 0..9),
        tail in prop::collection::vec(0..4usize, 0..5),
    ) {
        let spec = GroupSpec::BraidStandard;
        let mut w1 = to_word(&spec, &r1);
        // Make equal pairs likely: w2 = w1 · t · t⁻¹ shuffled by a relation.
        let t = to_word(&spec, &tail);
        let mut w2 = to_word(&spec, &r2);
        if r2.len() % 2 == 0 {
            w2 = w1.clone();
            w2.extend(t.iter().copied());
            w2.extend(inverse_word(&t));
            w1.extend([SignedGenerator::positive(1), SignedGenerator::positive(2), SignedGenerator::positive(1)]);
            w2.extend([SignedGenerator::positive(2), SignedGenerator::positive(1), SignedGenerator::positive(2)]);
        }
        let nf_equal = evaluate_word(&spec, &w1).unwrap() == evaluate_word(&spec, &w2).unwrap();
        let burau_equal = burau_word(&w1) == burau_word(&w2);
        prop_assert_eq!(nf_equal, burau_equal);
    }

    #[test]
    fn axa_and_standard_engines_agree(raw in prop::collection::vec(0..4usize, 0..12)) {
        let axa = GroupSpec::BraidAxa;
        let w = to_word(&axa, &raw);
        let std_word = axa_to_standard(&w);
        let nf_axa = evaluate_word(&axa, &w).unwrap();
        let nf_std = evaluate_word(&GroupSpec::BraidStandard, &std_word).unwrap();
        // x³ = (ab)³ = Δ², so <x³> sits inside <aba> with index 2.
        if nf_axa.in_delta_subgroup() {
            prop_assert!(nf_std.in_delta_subgroup());
            prop_assert_eq!(nf_std.m, 2 * nf_axa.m);
        }
        if nf_std.in_delta_subgroup() && nf_std.m % 2 == 0 {
            prop_assert!(nf_axa.in_delta_subgroup());
        }
    }
}

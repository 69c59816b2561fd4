use cogrowth_series::{ParityClass, QPolynomial, QZSeries};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn poly_strategy(max_len: usize, bits: u32) -> impl Strategy<Value = QPolynomial> {
    (-6i64..6, prop::collection::vec(any::<i64>(), 0..max_len)).prop_map(move |(lo, cs)| {
        let coeffs = cs.into_iter().map(|c| BigInt::from(c >> (63 - bits))).collect();
        QPolynomial::from_coeffs(lo, coeffs)
    })
}

fn series_strategy(order: usize) -> impl Strategy<Value = QZSeries> {
    prop::collection::vec(prop_oneof![poly_strategy(4, 8), poly_strategy(40, 62)], order + 1)
        .prop_map(QZSeries::from_coeffs)
}

fn unit_series(order: usize) -> impl Strategy<Value = QZSeries> {
    (series_strategy(order), any::<bool>()).prop_map(|(s, neg)| {
        let mut s = s;
        s.set_coeff(0, QPolynomial::constant(if neg { -1 } else { 1 }));
        s
    })
}

fn mass(s: &QZSeries) -> BigInt {
    s.coeffs().iter().flat_map(|c| c.coeffs().iter().map(|x| x.abs())).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in series_strategy(6), b in series_strategy(6), c in series_strategy(6)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            ab.add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&QZSeries::one(6)).unwrap(), a.clone());
    }

    #[test]
    fn polynomial_products_agree_with_naive(a in poly_strategy(60, 62), b in poly_strategy(60, 62)) {
        let mut naive = QPolynomial::zero();
        for (ea, ca) in a.terms() {
            for (eb, cb) in b.terms() {
                naive = &naive + &QPolynomial::monomial(ca * cb, ea + eb);
            }
        }
        prop_assert_eq!(&a * &b, naive);
    }

    #[test]
    fn reciprocal_is_an_inverse(a in unit_series(8)) {
        let r = a.reciprocal().unwrap();
        prop_assert_eq!(a.mul(&r).unwrap(), QZSeries::one(8));
        prop_assert_eq!(r.reciprocal().unwrap(), a);
    }

    #[test]
    fn parity_transforms_preserve_mass(a in series_strategy(8)) {
        let even = QZSeries::from_coeffs(
            a.coeffs().iter().enumerate().map(|(n, c)| if n % 2 == 0 { c.clone() } else { QPolynomial::zero() }).collect(),
        );
        let t = even.parity_transform(ParityClass::Even).unwrap();
        prop_assert_eq!(mass(&t), mass(&even));
        prop_assert_eq!(t.inverse_parity_transform(ParityClass::Even), even);

        let odd = QZSeries::from_coeffs(
            a.coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    let pairs: Vec<(i64, BigInt)> = c
                        .terms()
                        .filter(|(m, _)| (m - n as i64).rem_euclid(2) == 0)
                        .map(|(m, v)| (m, v.clone()))
                        .collect();
                    QPolynomial::from_pairs(&pairs)
                })
                .collect(),
        );
        let t = odd.parity_transform(ParityClass::Odd).unwrap();
        prop_assert_eq!(mass(&t), mass(&odd));
        prop_assert_eq!(t.inverse_parity_transform(ParityClass::Odd), odd);
    }

    #[test]
    fn loop_basis_round_trips(d in prop::collection::vec(-1000i64..1000, 1..30)) {
        let d: Vec<BigInt> = d.into_iter().map(BigInt::from).collect();
        let p = QPolynomial::from_loop_basis(&d);
        prop_assert!(p.is_symmetric());
        let mut back = p.loop_basis().unwrap();
        let mut d = d;
        while d.last().is_some_and(|x| x == &BigInt::from(0)) {
            d.pop();
        }
        back.truncate(d.len());
        prop_assert_eq!(back, d);
    }
}

fn p(pairs: &[(i64, i64)]) -> QPolynomial {
    QPolynomial::from_pairs(pairs)
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().copied().map(BigInt::from).collect()
}

#[test]
fn product_examples() {
    let a = QZSeries::from_coeffs(vec![p(&[(0, 1)]), p(&[(1, 1)]), QPolynomial::zero()]);
    let b = QZSeries::from_coeffs(vec![p(&[(0, 1)]), p(&[(-1, 1)]), QPolynomial::zero()]);
    let expected = QZSeries::from_coeffs(vec![p(&[(0, 1)]), p(&[(-1, 1), (1, 1)]), p(&[(0, 1)])]);
    assert_eq!(a.mul(&b).unwrap(), expected);

    let geo = QZSeries::from_coeffs(vec![p(&[(0, 1)]); 6]);
    assert_eq!(geo.mul(&geo).unwrap().at_q_one(), ints(&[1, 2, 3, 4, 5, 6]));
    assert!(geo.mul(&QZSeries::one(3)).is_err());
}

#[test]
fn reciprocal_examples() {
    let mut one_minus_z = QZSeries::one(5);
    one_minus_z.set_coeff(1, p(&[(0, -1)]));
    assert_eq!(one_minus_z.reciprocal().unwrap().at_q_one(), ints(&[1; 6]));

    let mut walk = QZSeries::one(4);
    walk.set_coeff(1, p(&[(-1, -1), (1, -1)]));
    let r = walk.reciprocal().unwrap();
    for n in 0..=4 {
        let d: Vec<BigInt> = (0..=n).map(|l| BigInt::from((l == n) as i64)).collect();
        assert_eq!(r.coeff(n), &QPolynomial::from_loop_basis(&d));
    }
}

#[test]
fn constant_term_examples() {
    // Σ z^(2n) (q + 2 + 1/q)^n has [q^0] = binom(2n, n), and the G(2,2) series squares it.
    let mut s = QZSeries::zero(6);
    let base = p(&[(-1, 1), (0, 2), (1, 1)]);
    let mut pow = QPolynomial::one();
    for n in 0..=3 {
        s.set_coeff(2 * n, pow.clone());
        pow = &pow * &base;
    }
    assert_eq!(s.q_constant_term(), ints(&[1, 0, 2, 0, 6, 0, 20]));

    let mut qz = QZSeries::zero(1);
    qz.set_coeff(1, p(&[(1, 1)]));
    assert_eq!(qz.q_constant_term(), ints(&[0, 0]));
}

#[test]
fn parity_examples() {
    let s = QZSeries::from_coeffs(vec![p(&[(0, 1)]), QPolynomial::zero(), p(&[(-1, 1), (0, 2), (1, 1)])]);
    let t = s.parity_transform(ParityClass::Even).unwrap();
    assert_eq!(
        t,
        QZSeries::from_coeffs(vec![p(&[(0, 1)]), p(&[(-1, 1), (0, 2), (1, 1)])])
    );

    let s = QZSeries::from_coeffs(vec![QPolynomial::zero(), p(&[(-1, 1), (1, 1)])]);
    let t = s.parity_transform(ParityClass::Odd).unwrap();
    assert_eq!(t.coeff(1), &p(&[(0, 1), (1, 1)]));
    assert_eq!(t.inverse_parity_transform(ParityClass::Odd), s);
}

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::{GroupError, GroupSpec, SignedGenerator};

/// One syllable `a_index^exp` of a star-polygon suffix. `index` is 0-based here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub index: u32,
    pub exp: u32,
}

/// A letter of the positive braid monoid on `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BraidLetter {
    A,
    B,
}

impl BraidLetter {
    /// The involution `a <-> b`, which is conjugation by `Δ`.
    pub fn swap(self) -> Self {
        match self {
            BraidLetter::A => BraidLetter::B,
            BraidLetter::B => BraidLetter::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            BraidLetter::A => 'a',
            BraidLetter::B => 'b',
        }
    }
}

/// Canonical suffix `v` of the normal form `Δ^m · v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suffix {
    /// Star-polygon groups and the axa carrier: syllables with adjacent indices distinct.
    Syllables(Vec<Syllable>),
    /// Standard braid presentation: a positive word avoiding `aba` and `bab`.
    Word(Vec<BraidLetter>),
}

impl Suffix {
    pub fn is_empty(&self) -> bool {
        match self {
            Suffix::Syllables(s) => s.is_empty(),
            Suffix::Word(w) => w.is_empty(),
        }
    }
}

/// An element `Δ^m · v` in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    pub m: i64,
    pub suffix: Suffix,
}

const AXA_CARRIER: [u32; 2] = [2, 3];
const CARRIER_C: u32 = 0;
const CARRIER_X: u32 = 1;

impl NormalForm {
    /// The identity element of the given presentation.
    pub fn identity(spec: &GroupSpec) -> Self {
        let suffix = match spec {
            GroupSpec::BraidStandard => Suffix::Word(Vec::new()),
            _ => Suffix::Syllables(Vec::new()),
        };
        NormalForm { m: 0, suffix }
    }

    /// Whether the element lies in `<Δ>`.
    pub fn in_delta_subgroup(&self) -> bool {
        self.suffix.is_empty()
    }

    /// Checks the normal-form invariants for `spec`.
    pub fn is_valid(&self, spec: &GroupSpec) -> bool {
        match (&self.suffix, spec) {
            (Suffix::Syllables(s), GroupSpec::StarPolygon { periods }) => syllables_valid(s, periods),
            (Suffix::Syllables(s), GroupSpec::BraidAxa) => syllables_valid(s, &AXA_CARRIER),
            (Suffix::Word(w), GroupSpec::BraidStandard) => w.windows(3).all(|t| !(t[0] == t[2] && t[1] == t[0].swap())),
            _ => false,
        }
    }

    /// Right-multiplies in place by `g` and returns the change of the `Δ`-exponent.
    pub fn apply(&mut self, spec: &GroupSpec, g: SignedGenerator) -> Result<i64, GroupError> {
        spec.check_generator(g)?;
        let before = self.m;
        match (spec, &mut self.suffix) {
            (GroupSpec::StarPolygon { periods }, Suffix::Syllables(s)) => {
                star_step(periods, &mut self.m, s, (g.index - 1) as u32, g.inverse);
            }
            (GroupSpec::BraidStandard, Suffix::Word(w)) => {
                let letter = if g.index == 1 { BraidLetter::A } else { BraidLetter::B };
                braid_step(&mut self.m, w, letter, g.inverse);
            }
            (GroupSpec::BraidAxa, Suffix::Syllables(s)) => {
                let m = &mut self.m;
                match (g.index, g.inverse) {
                    (1, false) => {
                        star_step(&AXA_CARRIER, m, s, CARRIER_C, false);
                        star_step(&AXA_CARRIER, m, s, CARRIER_X, true);
                    }
                    (1, true) => {
                        star_step(&AXA_CARRIER, m, s, CARRIER_X, false);
                        star_step(&AXA_CARRIER, m, s, CARRIER_C, true);
                    }
                    (_, inverse) => star_step(&AXA_CARRIER, m, s, CARRIER_X, inverse),
                }
            }
            _ => return Err(GroupError::InvalidNormalForm(spec.to_string())),
        }
        Ok(self.m - before)
    }

    /// Letters of the suffix as a string (`"ab..."`) for the standard braid presentation.
    pub fn word_string(&self) -> Option<String> {
        match &self.suffix {
            Suffix::Word(w) => Some(w.iter().map(|l| l.as_char()).collect()),
            Suffix::Syllables(_) => None,
        }
    }
}

impl Serialize for NormalForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("NormalForm", 2)?;
        st.serialize_field("m", &self.m)?;
        match &self.suffix {
            Suffix::Syllables(s) => {
                let pairs: Vec<[u32; 2]> = s.iter().map(|y| [y.index + 1, y.exp]).collect();
                st.serialize_field("suffix", &pairs)?;
            }
            Suffix::Word(_) => {
                st.serialize_field("word", &self.word_string().unwrap_or_default())?;
            }
        }
        st.end()
    }
}

fn syllables_valid(s: &[Syllable], periods: &[u32]) -> bool {
    s.iter()
        .all(|y| (y.index as usize) < periods.len() && y.exp >= 1 && y.exp < periods[y.index as usize])
        && s.windows(2).all(|w| w[0].index != w[1].index)
}

fn star_step(periods: &[u32], m: &mut i64, s: &mut Vec<Syllable>, index: u32, inverse: bool) {
    let p = periods[index as usize];
    match s.last_mut() {
        Some(last) if last.index == index => {
            if inverse {
                if last.exp == 1 {
                    s.pop();
                } else {
                    last.exp -= 1;
                }
            } else if last.exp + 1 == p {
                s.pop();
                *m += 1;
            } else {
                last.exp += 1;
            }
        }
        _ => {
            if inverse {
                s.push(Syllable { index, exp: p - 1 });
                *m -= 1;
            } else {
                s.push(Syllable { index, exp: 1 });
            }
        }
    }
}

fn braid_push(m: &mut i64, w: &mut Vec<BraidLetter>, x: BraidLetter) {
    w.push(x);
    let n = w.len();
    if n >= 3 && w[n - 3] == x && w[n - 2] == x.swap() {
        w.truncate(n - 3);
        *m += 1;
        for l in w.iter_mut() {
            *l = l.swap();
        }
    }
}

fn braid_step(m: &mut i64, w: &mut Vec<BraidLetter>, x: BraidLetter, inverse: bool) {
    if !inverse {
        braid_push(m, w, x);
    } else if w.last() == Some(&x) {
        w.pop();
    } else {
        // v·x⁻¹ = Δ⁻¹·φ(v)·(Δx⁻¹) and Δx⁻¹ = x·φ(x).
        *m -= 1;
        for l in w.iter_mut() {
            *l = l.swap();
        }
        braid_push(m, w, x);
        braid_push(m, w, x.swap());
    }
}

/// Returns the normal form of `nf · g` together with the change of the `Δ`-exponent.
pub fn apply_generator(spec: &GroupSpec, nf: &NormalForm, g: SignedGenerator) -> Result<(NormalForm, i64), GroupError> {
    let mut out = nf.clone();
    let delta = out.apply(spec, g)?;
    Ok((out, delta))
}

/// Evaluates a word left to right starting from the identity.
pub fn evaluate_word(spec: &GroupSpec, word: &[SignedGenerator]) -> Result<NormalForm, GroupError> {
    let mut nf = NormalForm::identity(spec);
    for &g in word {
        nf.apply(spec, g)?;
    }
    Ok(nf)
}

/// Whether `nf` lies on the one-sided graph of `facet` (1-based): its suffix is empty
/// or starts with a syllable of that generator.
pub fn one_sided_allowed(spec: &GroupSpec, nf: &NormalForm, facet: usize) -> Result<bool, GroupError> {
    let GroupSpec::StarPolygon { periods } = spec else {
        return Err(GroupError::NotStarPolygon);
    };
    if facet == 0 || facet > periods.len() {
        return Err(GroupError::FacetOutOfRange {
            index: facet,
            count: periods.len(),
        });
    }
    match &nf.suffix {
        Suffix::Syllables(s) => Ok(s.first().is_none_or(|y| y.index as usize + 1 == facet)),
        Suffix::Word(_) => Err(GroupError::InvalidNormalForm(spec.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(i: usize) -> SignedGenerator {
        SignedGenerator::positive(i)
    }
    fn gi(i: usize) -> SignedGenerator {
        SignedGenerator::negative(i)
    }
    fn syl(pairs: &[(u32, u32)]) -> Suffix {
        Suffix::Syllables(pairs.iter().map(|&(i, e)| Syllable { index: i - 1, exp: e }).collect())
    }
    fn word(s: &str) -> Suffix {
        Suffix::Word(
            s.chars()
                .map(|c| if c == 'a' { BraidLetter::A } else { BraidLetter::B })
                .collect(),
        )
    }

    #[test]
    fn star_completing_a_facet_increments_m() {
        let spec = GroupSpec::parse("G(3,4)").unwrap();
        let nf = NormalForm {
            m: 0,
            suffix: syl(&[(1, 2)]),
        };
        let (out, d) = apply_generator(&spec, &nf, g(1)).unwrap();
        assert_eq!(out, NormalForm { m: 1, suffix: syl(&[]) });
        assert_eq!(d, 1);
    }

    #[test]
    fn star_inverse_from_identity() {
        let spec = GroupSpec::parse("G(3,4)").unwrap();
        let (out, d) = apply_generator(&spec, &NormalForm::identity(&spec), gi(1)).unwrap();
        assert_eq!(
            out,
            NormalForm {
                m: -1,
                suffix: syl(&[(1, 2)])
            }
        );
        assert_eq!(d, -1);
    }

    #[test]
    fn star_words() {
        let g22 = GroupSpec::parse("G(2,2)").unwrap();
        assert_eq!(
            evaluate_word(&g22, &[g(1), g(1)]).unwrap(),
            NormalForm { m: 1, suffix: syl(&[]) }
        );
        let g23 = GroupSpec::parse("G(2,3)").unwrap();
        assert_eq!(
            evaluate_word(&g23, &[g(1), gi(1), g(2), gi(2)]).unwrap(),
            NormalForm::identity(&g23)
        );
        assert_eq!(
            evaluate_word(&g23, &[g(2), g(2), g(2)]).unwrap(),
            NormalForm { m: 1, suffix: syl(&[]) }
        );
    }

    #[test]
    fn braid_strip_and_swap() {
        let spec = GroupSpec::BraidStandard;
        let nf = NormalForm {
            m: 0,
            suffix: word("ab"),
        };
        let (out, d) = apply_generator(&spec, &nf, g(1)).unwrap();
        assert_eq!(out, NormalForm { m: 1, suffix: word("") });
        assert_eq!(d, 1);
        assert_eq!(
            evaluate_word(&spec, &[g(1), g(2), g(1), g(2)]).unwrap(),
            NormalForm {
                m: 1,
                suffix: word("b")
            }
        );
    }

    #[test]
    fn braid_inverse_from_identity() {
        // Δ⁻¹·ab = a⁻¹b⁻¹a⁻¹ab = a⁻¹.
        let spec = GroupSpec::BraidStandard;
        let (out, d) = apply_generator(&spec, &NormalForm::identity(&spec), gi(1)).unwrap();
        assert_eq!(
            out,
            NormalForm {
                m: -1,
                suffix: word("ab")
            }
        );
        assert_eq!(d, -1);
        let (out, _) = apply_generator(&spec, &NormalForm::identity(&spec), gi(2)).unwrap();
        assert_eq!(
            out,
            NormalForm {
                m: -1,
                suffix: word("ba")
            }
        );
    }

    #[test]
    fn braid_relation_holds() {
        let spec = GroupSpec::BraidStandard;
        let aba = evaluate_word(&spec, &[g(1), g(2), g(1)]).unwrap();
        let bab = evaluate_word(&spec, &[g(2), g(1), g(2)]).unwrap();
        assert_eq!(aba, bab);
        assert_eq!(aba, NormalForm { m: 1, suffix: word("") });
    }

    #[test]
    fn axa_letter_a_is_c_then_x_inverse() {
        let spec = GroupSpec::BraidAxa;
        let (out, d) = apply_generator(&spec, &NormalForm::identity(&spec), g(1)).unwrap();
        assert_eq!(
            out,
            NormalForm {
                m: -1,
                suffix: syl(&[(1, 1), (2, 2)])
            }
        );
        assert_eq!(d, -1);
    }

    #[test]
    fn axa_relation_holds() {
        let spec = GroupSpec::BraidAxa;
        let axa = evaluate_word(&spec, &[g(1), g(2), g(1)]).unwrap();
        let xx = evaluate_word(&spec, &[g(2), g(2)]).unwrap();
        assert_eq!(axa, xx);
        let x3 = evaluate_word(&spec, &[g(2), g(2), g(2)]).unwrap();
        assert_eq!(x3, NormalForm { m: 1, suffix: syl(&[]) });
    }

    #[test]
    fn one_sided_membership() {
        let spec = GroupSpec::parse("G(3,4)").unwrap();
        let root = NormalForm { m: 5, suffix: syl(&[]) };
        assert!(one_sided_allowed(&spec, &root, 1).unwrap());
        assert!(one_sided_allowed(&spec, &root, 2).unwrap());
        let a = NormalForm {
            m: 0,
            suffix: syl(&[(1, 1)]),
        };
        assert!(one_sided_allowed(&spec, &a, 1).unwrap());
        let b = NormalForm {
            m: 0,
            suffix: syl(&[(2, 1)]),
        };
        assert!(!one_sided_allowed(&spec, &b, 1).unwrap());
        assert!(one_sided_allowed(&spec, &b, 3).is_err());
        assert!(one_sided_allowed(&GroupSpec::BraidAxa, &b, 1).is_err());
    }

    #[test]
    fn rejects_foreign_generator() {
        let spec = GroupSpec::parse("G(3,4)").unwrap();
        let mut nf = NormalForm::identity(&spec);
        assert!(nf.apply(&spec, g(3)).is_err());
    }

    #[test]
    fn json_shapes() {
        let spec = GroupSpec::parse("G(3,4)").unwrap();
        let nf = NormalForm {
            m: -1,
            suffix: syl(&[(1, 2), (2, 3)]),
        };
        assert!(nf.is_valid(&spec));
        assert_eq!(
            serde_json::to_string(&nf).unwrap(),
            r#"{"m":-1,"suffix":[[1,2],[2,3]]}"#
        );
        let b = NormalForm {
            m: 2,
            suffix: word("abba"),
        };
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"m":2,"word":"abba"}"#);
    }
}

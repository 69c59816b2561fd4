use std::fmt;
use std::str::FromStr;

use crate::GroupError;

/// Which group presentation a computation refers to.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    /// `<a1,...,ak | a1^p1 = ... = ak^pk>` with `k >= 2` and every `p_i >= 2`.
    StarPolygon { periods: Vec<u32> },
    /// `<a, b | aba = bab>` with `Δ = aba`.
    BraidStandard,
    /// `<a, x | axa = x^2>`, carried on `G(2,3)` through `c = a·x`.
    BraidAxa,
}

impl GroupSpec {
    /// Builds a star-polygon group, validating the periods.
    pub fn star(periods: &[u32]) -> Result<Self, GroupError> {
        if periods.len() < 2 {
            return Err(GroupError::TooFewPeriods(periods.len()));
        }
        if let Some(&p) = periods.iter().find(|&&p| p < 2) {
            return Err(GroupError::PeriodTooSmall(p));
        }
        Ok(GroupSpec::StarPolygon {
            periods: periods.to_vec(),
        })
    }

    /// Parses `G(p1,...,pk)`, `B3-standard`, `B3-axa` or `B3-trefoil` (an alias for `G(2,3)`).
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let t = text.trim();
        match t {
            "B3-standard" => return Ok(GroupSpec::BraidStandard),
            "B3-axa" => return Ok(GroupSpec::BraidAxa),
            "B3-trefoil" => return GroupSpec::star(&[2, 3]),
            _ => {}
        }
        let inner = t
            .strip_prefix("G(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| GroupError::Malformed(text.to_string()))?;
        let periods = inner
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| GroupError::Malformed(text.to_string()))?;
        GroupSpec::star(&periods)
    }

    /// Number of generators of the presentation (inverses not counted).
    pub fn generator_count(&self) -> usize {
        match self {
            GroupSpec::StarPolygon { periods } => periods.len(),
            GroupSpec::BraidStandard | GroupSpec::BraidAxa => 2,
        }
    }

    /// Periods of a star-polygon group, `None` for the braid presentations.
    pub fn periods(&self) -> Option<&[u32]> {
        match self {
            GroupSpec::StarPolygon { periods } => Some(periods),
            _ => None,
        }
    }

    /// All `2k` signed generators, positive letters first.
    pub fn alphabet(&self) -> Vec<SignedGenerator> {
        let k = self.generator_count();
        (1..=k)
            .map(SignedGenerator::positive)
            .chain((1..=k).map(SignedGenerator::negative))
            .collect()
    }

    /// Validates a signed generator against this presentation.
    pub fn check_generator(&self, g: SignedGenerator) -> Result<(), GroupError> {
        let count = self.generator_count();
        if g.index == 0 || g.index > count {
            return Err(GroupError::GeneratorOutOfRange { index: g.index, count });
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::StarPolygon { periods } => {
                let parts: Vec<String> = periods.iter().map(|p| p.to_string()).collect();
                write!(f, "G({})", parts.join(","))
            }
            GroupSpec::BraidStandard => write!(f, "B3-standard"),
            GroupSpec::BraidAxa => write!(f, "B3-axa"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupSpec::parse(s)
    }
}

/// A generator `a_index` or its inverse. Indices start at 1.
///
/// For the braid presentations index 1 is `a` and index 2 is `b` (standard) or `x` (axa).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedGenerator {
    pub index: usize,
    pub inverse: bool,
}

impl SignedGenerator {
    pub fn positive(index: usize) -> Self {
        SignedGenerator { index, inverse: false }
    }

    pub fn negative(index: usize) -> Self {
        SignedGenerator { index, inverse: true }
    }

    /// The inverse letter.
    pub fn inv(self) -> Self {
        SignedGenerator {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    /// `+1` for a generator, `-1` for an inverse.
    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

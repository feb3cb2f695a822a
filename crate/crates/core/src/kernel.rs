//! Belief update probabilities.
//!
//! Every function here is pure. Beliefs are compared only through their
//! distance `|b_u - b|`, so all cognitive `β` functions are symmetric and
//! non-increasing in that distance.

use core::fmt;
use core::ops::Mul;

use crate::belief::Belief;
use crate::error::{invalid, Error, Result};

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(Error::ProbabilityOutOfRange(value))
        }
    }

    /// Clamps into `[0, 1]`. NaN maps to 0.
    pub fn saturating(value: f64) -> Self {
        if value >= 1.0 {
            Probability::ONE
        } else if value > 0.0 {
            Probability(value)
        } else {
            Probability::ZERO
        }
    }

    #[inline]
    pub const fn get(self) -> f64 {
        self.0
    }
}

impl Mul for Probability {
    type Output = Probability;

    fn mul(self, rhs: Probability) -> Probability {
        Probability(self.0 * rhs.0)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Contact probability used for simple contagion in the comparison runs.
pub const DEFAULT_SIMPLE_P: f64 = 0.15;
/// Neighbor ratio used for complex contagion in the comparison runs.
pub const DEFAULT_COMPLEX_ALPHA: f64 = 0.35;

/// Belief update rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContagionModel {
    /// Adopt with constant probability `p` per contact.
    Simple { p: f64 },
    /// Adopt iff at least a fraction `alpha` of neighbors hold the incoming belief.
    Complex { alpha: f64 },
    /// Adopt iff the belief distance is at most `gamma`.
    CognitiveThreshold { gamma: u32 },
    /// `min(1, 1 / (gamma + alpha * d))`.
    CognitiveLinear { gamma: f64, alpha: f64 },
    /// `1 / (1 + exp(alpha * (d - gamma)))`.
    CognitiveSigmoid { alpha: f64, gamma: f64 },
}

/// The three parameterizations explored for each cognitive function family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Disposition {
    Gullible,
    Normal,
    Stubborn,
}

impl Disposition {
    pub const ALL: [Disposition; 3] = [Self::Gullible, Self::Normal, Self::Stubborn];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gullible => "gullible",
            Self::Normal => "normal",
            Self::Stubborn => "stubborn",
        }
    }
}

impl ContagionModel {
    pub fn simple(p: f64) -> Result<Self> {
        let m = Self::Simple { p };
        m.validate()?;
        Ok(m)
    }

    pub fn complex(alpha: f64) -> Result<Self> {
        let m = Self::Complex { alpha };
        m.validate()?;
        Ok(m)
    }

    /// The defensive cognitive contagion rule: stubborn sigmoid, `alpha = 4, gamma = 2`.
    pub const fn dcc() -> Self {
        Self::CognitiveSigmoid {
            alpha: 4.0,
            gamma: 2.0,
        }
    }

    pub const fn linear_preset(d: Disposition) -> Self {
        let (gamma, alpha) = match d {
            Disposition::Gullible => (1.0, 0.0),
            Disposition::Normal => (1.0, 1.0),
            Disposition::Stubborn => (10.0, 20.0),
        };
        Self::CognitiveLinear { gamma, alpha }
    }

    pub const fn threshold_preset(d: Disposition) -> Self {
        let gamma = match d {
            Disposition::Gullible => 6,
            Disposition::Normal => 3,
            Disposition::Stubborn => 1,
        };
        Self::CognitiveThreshold { gamma }
    }

    pub const fn sigmoid_preset(d: Disposition) -> Self {
        let (alpha, gamma) = match d {
            Disposition::Gullible => (1.0, 7.0),
            Disposition::Normal => (2.0, 3.0),
            Disposition::Stubborn => (4.0, 2.0),
        };
        Self::CognitiveSigmoid { alpha, gamma }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Simple { .. } => "simple",
            Self::Complex { .. } => "complex",
            Self::CognitiveThreshold { .. } => "threshold",
            Self::CognitiveLinear { .. } => "linear",
            Self::CognitiveSigmoid { .. } => "sigmoid",
        }
    }

    pub fn is_cognitive(&self) -> bool {
        !matches!(self, Self::Simple { .. } | Self::Complex { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Simple { p } => {
                if !(p > 0.0 && p < 1.0) {
                    return Err(invalid("p", "must lie in (0, 1)"));
                }
            }
            Self::Complex { alpha } => {
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(invalid("alpha", "must lie in [0, 1]"));
                }
            }
            Self::CognitiveThreshold { .. } => {}
            Self::CognitiveLinear { gamma, alpha } => {
                if !(gamma >= 0.0 && gamma.is_finite()) {
                    return Err(invalid("gamma", "must be finite and non-negative"));
                }
                if !(alpha >= 0.0 && alpha.is_finite()) {
                    return Err(invalid("alpha", "must be finite and non-negative"));
                }
                if gamma == 0.0 && alpha == 0.0 {
                    return Err(invalid("gamma", "gamma and alpha cannot both be zero"));
                }
            }
            Self::CognitiveSigmoid { alpha, gamma } => {
                if !(alpha >= 0.0 && alpha.is_finite()) {
                    return Err(invalid("alpha", "must be finite and non-negative"));
                }
                if !gamma.is_finite() {
                    return Err(invalid("gamma", "must be finite"));
                }
            }
        }
        Ok(())
    }

    /// Per-agent cognitive probability `β(b_u, b)`, or `None` for the
    /// simple and complex rules.
    pub fn beta(&self, b_u: Belief, b: Belief) -> Option<Probability> {
        match *self {
            Self::CognitiveThreshold { gamma } => Some(threshold_beta(b_u, b, gamma)),
            Self::CognitiveLinear { gamma, alpha } => {
                Some(linear_beta_unchecked(b_u, b, gamma, alpha))
            }
            Self::CognitiveSigmoid { alpha, gamma } => Some(sigmoid_beta(b_u, b, alpha, gamma)),
            Self::Simple { .. } | Self::Complex { .. } => None,
        }
    }
}

/// Logistic rule: `1 / (1 + e^(alpha (|b_u - b| - gamma)))`.
pub fn sigmoid_beta(b_u: Belief, b: Belief, alpha: f64, gamma: f64) -> Probability {
    let d = f64::from(b_u.distance(b));
    Probability::saturating(1.0 / (1.0 + libm::exp(alpha * (d - gamma))))
}

/// Inverse-linear rule `1 / (gamma + alpha |b_u - b|)`, clamped to 1.
pub fn linear_beta(b_u: Belief, b: Belief, gamma: f64, alpha: f64) -> Result<Probability> {
    if gamma == 0.0 && alpha == 0.0 {
        return Err(invalid("gamma", "gamma and alpha cannot both be zero"));
    }
    Ok(linear_beta_unchecked(b_u, b, gamma, alpha))
}

fn linear_beta_unchecked(b_u: Belief, b: Belief, gamma: f64, alpha: f64) -> Probability {
    let denom = gamma + alpha * f64::from(b_u.distance(b));
    // a zero denominator is the limit of an ever smaller one
    if denom <= 0.0 {
        return Probability::ONE;
    }
    Probability::saturating(1.0 / denom)
}

/// Bounded-confidence rule: 1 if `|b_u - b| <= gamma`, else 0.
pub fn threshold_beta(b_u: Belief, b: Belief, gamma: u32) -> Probability {
    if u32::from(b_u.distance(b)) <= gamma {
        Probability::ONE
    } else {
        Probability::ZERO
    }
}

/// Probability that an agent holding `b_u` adopts an incoming `b_msg`.
///
/// `believing_neighbor_fraction` is the share of the agent's neighbors whose
/// current belief equals `b_msg`; only the complex rule reads it.
pub fn contagion_prob(
    model: &ContagionModel,
    b_u: Belief,
    b_msg: Belief,
    believing_neighbor_fraction: f64,
) -> Probability {
    match *model {
        ContagionModel::Simple { p } => Probability::saturating(p),
        ContagionModel::Complex { alpha } => {
            if believing_neighbor_fraction >= alpha {
                Probability::ONE
            } else {
                Probability::ZERO
            }
        }
        _ => model.beta(b_u, b_msg).unwrap_or(Probability::ZERO),
    }
}

/// Smallest number of independent contacts, each infecting with probability
/// `p`, that pushes the infection chance `1 - (1 - p)^n` to at least `delta`.
pub fn min_infected_neighbors(p: f64, delta: f64) -> Result<u32> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("p", "must lie in (0, 1)"));
    }
    if !(0.0..1.0).contains(&delta) {
        return Err(invalid("delta", "must lie in [0, 1)"));
    }
    let closed_form = libm::ceil(libm::log(1.0 - delta) / libm::log(1.0 - p));
    let reaches = |n: u32| 1.0 - libm::pow(1.0 - p, f64::from(n)) >= delta;
    // the closed form can land one off when the ratio is (nearly) integral
    let mut n = closed_form.max(0.0) as u32;
    while n > 0 && reaches(n - 1) {
        n -= 1;
    }
    while !reaches(n) {
        n += 1;
    }
    Ok(n)
}

/// `β(i, j)` for every pair of belief levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaTable(pub [[Probability; Belief::LEVELS]; Belief::LEVELS]);

impl BetaTable {
    pub fn get(&self, b_u: Belief, b_v: Belief) -> Probability {
        self.0[b_u.index()][b_v.index()]
    }

    pub fn rows(&self) -> &[[Probability; Belief::LEVELS]; Belief::LEVELS] {
        &self.0
    }
}

pub fn beta_table(model: &ContagionModel) -> Result<BetaTable> {
    let mut table = [[Probability::ZERO; Belief::LEVELS]; Belief::LEVELS];
    for i in Belief::all() {
        for j in Belief::all() {
            table[i.index()][j.index()] = model.beta(i, j).ok_or(Error::UnsupportedModel {
                model: model.name(),
                operation: "beta_table",
            })?;
        }
    }
    Ok(BetaTable(table))
}

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{binomial, factorial, symmetrize_explicitly, LevelProfile, WeightFunction};
use crate::poset::{is_copy, is_embedding, Embedding, LatticeCopy, LatticeElement, Poset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeakKind {
    /// Level totals `N_w(L_i) = C(n, i)`; the permutation average is a
    /// weighting with every multiplicity 1, so `r·w̄` is an `r`-partition.
    RPartition,
    /// Every multiplicity `≡ 1 (mod r)`.
    ModPartition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakCertificate {
    pub kind: WeakKind,
    pub poset: Poset,
    pub n: u32,
    pub r: BigUint,
    /// The base embedding `ψ : P → B(d)`.
    pub base_embedding: Embedding,
    pub weights: WeightFunction<LatticeCopy>,
    /// Integer weights before reduction mod `r`, with every multiplicity 1.
    pub integer_stage: Option<WeightFunction<LatticeCopy>>,
}

impl WeakCertificate {
    pub fn base_dim(&self) -> u32 {
        self.base_embedding.dim
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeakViolation {
    BaseEmbedding,
    NotACopy {
        copy: String,
    },
    WeightDomain {
        copy: String,
        weight: String,
    },
    Level {
        level: u32,
        expected: String,
        got: String,
    },
    Element {
        element: String,
        expected: String,
        got: String,
    },
    IntegerStage {
        element: String,
        got: String,
    },
    Modulus {
        expected: String,
        got: String,
    },
    TooLarge {
        n: u32,
    },
}

impl fmt::Display for WeakViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeakViolation::BaseEmbedding => write!(f, "base map is not an embedding"),
            WeakViolation::NotACopy { copy } => write!(f, "{copy} is not a copy of the poset"),
            WeakViolation::WeightDomain { copy, weight } => {
                write!(f, "weight {weight} on {copy} is outside the allowed range")
            }
            WeakViolation::Level {
                level,
                expected,
                got,
            } => {
                write!(f, "level {level}: total {got}, expected {expected}")
            }
            WeakViolation::Element {
                element,
                expected,
                got,
            } => {
                write!(
                    f,
                    "element {element}: multiplicity {got}, expected {expected}"
                )
            }
            WeakViolation::IntegerStage { element, got } => {
                write!(
                    f,
                    "integer stage at {element}: multiplicity {got}, expected 1"
                )
            }
            WeakViolation::Modulus { expected, got } => write!(f, "r = {got}, expected {expected}"),
            WeakViolation::TooLarge { n } => write!(f, "B({n}) is too large to enumerate"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WeakReport {
    pub violations: Vec<WeakViolation>,
    pub levels_checked: u32,
    pub elements_checked: u64,
    pub explicit_average: bool,
}

impl WeakReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Largest `n` for which per-element multiplicities are recomputed.
const ELEMENT_CHECK_DIM: u32 = 24;
/// Largest `n` for which the permutation average is materialized.
const EXPLICIT_AVERAGE_DIM: u32 = 5;

fn multiplicities(w: &WeightFunction<LatticeCopy>, n: u32) -> HashMap<u64, BigRational> {
    let mut out: HashMap<u64, BigRational> = HashMap::new();
    for (copy, v) in w.iter() {
        for x in copy.elements() {
            *out.entry(x.to_mask().unwrap_or(0))
                .or_insert_with(BigRational::zero) += v;
        }
    }
    debug_assert!(out.keys().all(|&m| n >= 64 || m >> n == 0));
    out
}

/// Recomputes every identity the certificate claims and lists what fails.
pub fn verify_weak_certificate(c: &WeakCertificate) -> WeakReport {
    let mut report = WeakReport::default();
    let n = c.n;
    let psi = &c.base_embedding;
    if !is_embedding(&c.poset, psi.dim, &psi.images) {
        report.violations.push(WeakViolation::BaseEmbedding);
    }
    let stages = std::iter::once(&c.weights).chain(c.integer_stage.as_ref());
    for w in stages {
        for (copy, _) in w.iter() {
            if copy.dim() != Some(n) || !is_copy(&c.poset, copy) {
                report.violations.push(WeakViolation::NotACopy {
                    copy: format!("{copy:?}"),
                });
            }
        }
    }
    match c.kind {
        WeakKind::RPartition => verify_levels(c, &mut report),
        WeakKind::ModPartition => verify_residues(c, &mut report),
    }
    report
}

fn verify_levels(c: &WeakCertificate, report: &mut WeakReport) {
    let n = c.n;
    for (copy, v) in c.weights.iter() {
        if v.is_negative() {
            report.violations.push(WeakViolation::WeightDomain {
                copy: format!("{copy:?}"),
                weight: v.to_string(),
            });
        }
    }
    let profile = LevelProfile::of(&c.weights, n);
    for i in 0..=n {
        let expected = BigRational::from_integer(BigInt::from(binomial(n, i)));
        let got = profile.level(i);
        if *got != expected {
            report.violations.push(WeakViolation::Level {
                level: i,
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }
    report.levels_checked = n + 1;
    let expected_r = factorial(n) * c.weights.denominator_lcm().to_biguint().unwrap_or_default();
    if expected_r != c.r {
        report.violations.push(WeakViolation::Modulus {
            expected: expected_r.to_string(),
            got: c.r.to_string(),
        });
    }
    if n <= EXPLICIT_AVERAGE_DIM {
        report.explicit_average = true;
        let Ok(avg) = symmetrize_explicitly(&c.weights, n) else {
            return;
        };
        let mult = multiplicities(&avg, n);
        let one = BigRational::one();
        for m in 0..1u64 << n {
            let got = mult.get(&m).cloned().unwrap_or_else(BigRational::zero);
            if got != one {
                report.violations.push(WeakViolation::Element {
                    element: LatticeElement::from_mask(n, m).to_string(),
                    expected: "1".into(),
                    got: got.to_string(),
                });
            }
        }
        report.elements_checked = 1 << n;
    }
}

fn verify_residues(c: &WeakCertificate, report: &mut WeakReport) {
    let n = c.n;
    if n > ELEMENT_CHECK_DIM {
        report.violations.push(WeakViolation::TooLarge { n });
        return;
    }
    if c.r.is_zero() {
        report.violations.push(WeakViolation::Modulus {
            expected: "positive".into(),
            got: "0".into(),
        });
        return;
    }
    let r = BigInt::from(c.r.clone());
    let rq = BigRational::from_integer(r.clone());
    for (copy, v) in c.weights.iter() {
        if !v.is_integer() || v.is_negative() || *v >= rq {
            report.violations.push(WeakViolation::WeightDomain {
                copy: format!("{copy:?}"),
                weight: v.to_string(),
            });
        }
    }
    let mult = multiplicities(&c.weights, n);
    let stage = c.integer_stage.as_ref().map(|s| multiplicities(s, n));
    let one = BigRational::one();
    for m in 0..1u64 << n {
        let got = mult.get(&m).cloned().unwrap_or_else(BigRational::zero);
        let ok = got.is_integer() && (got.to_integer() - BigInt::one()).mod_floor(&r).is_zero();
        if !ok {
            report.violations.push(WeakViolation::Element {
                element: LatticeElement::from_mask(n, m).to_string(),
                expected: format!("1 mod {r}"),
                got: got.to_string(),
            });
        }
        if let Some(stage) = &stage {
            let got = stage.get(&m).cloned().unwrap_or_else(BigRational::zero);
            if got != one {
                report.violations.push(WeakViolation::IntegerStage {
                    element: LatticeElement::from_mask(n, m).to_string(),
                    got: got.to_string(),
                });
            }
        }
    }
    report.elements_checked = 1 << n;
}

//! Gauss, Kloosterman and Salié sums by direct summation.

use num_complex::Complex64;
use serde::Serialize;

use crate::field::{FieldElement, FiniteField};
use crate::harness::report::fixed17;

/// Slack allowed on magnitude bounds.
pub const BOUND_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SumKind {
    Gauss,
    Kloosterman,
    Salie,
}

impl SumKind {
    pub fn name(self) -> &'static str {
        match self {
            SumKind::Gauss => "gauss",
            SumKind::Kloosterman => "kloosterman",
            SumKind::Salie => "salie",
        }
    }
}

/// A computed character sum with its magnitude and applicable bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharSumRecord {
    pub kind: SumKind,
    pub a: Option<u32>,
    pub b: Option<u32>,
    #[serde(serialize_with = "fixed17")]
    pub value_re: f64,
    #[serde(serialize_with = "fixed17")]
    pub value_im: f64,
    #[serde(serialize_with = "fixed17")]
    pub magnitude: f64,
    /// sqrt(q) for Gauss sums, 2 sqrt(q) otherwise; `None` for the
    /// degenerate pair (0, 0) where no bound applies.
    #[serde(serialize_with = "crate::harness::report::fixed17_opt")]
    pub bound: Option<f64>,
}

impl CharSumRecord {
    fn new(
        kind: SumKind,
        a: Option<u32>,
        b: Option<u32>,
        value: Complex64,
        bound: Option<f64>,
    ) -> Self {
        CharSumRecord {
            kind,
            a,
            b,
            value_re: value.re,
            value_im: value.im,
            magnitude: value.norm(),
            bound,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }

    /// Whether the magnitude respects its bound: equality to relative
    /// tolerance for Gauss sums, the Weil bound otherwise. Always true when
    /// no bound applies.
    pub fn passes(&self) -> bool {
        match (self.kind, self.bound) {
            (_, None) => true,
            (SumKind::Gauss, Some(b)) => (self.magnitude - b).abs() <= BOUND_TOLERANCE * b,
            (_, Some(b)) => self.magnitude <= b + BOUND_TOLERANCE,
        }
    }
}

/// G(chi, eta) = sum over a != 0 of chi(a) eta(a).
pub fn gauss_sum_value(field: &FiniteField) -> Complex64 {
    field
        .nonzero_elements()
        .map(|a| field.additive_char(a) * field.eta_total(a) as f64)
        .sum()
}

pub fn gauss_sum(field: &FiniteField) -> CharSumRecord {
    let bound = (field.order() as f64).sqrt();
    CharSumRecord::new(
        SumKind::Gauss,
        None,
        None,
        gauss_sum_value(field),
        Some(bound),
    )
}

fn twisted_sum(field: &FiniteField, a: FieldElement, b: FieldElement, twist: bool) -> Complex64 {
    field
        .nonzero_elements()
        .map(|s| {
            let inv = field.inv(s).expect("s is nonzero");
            let arg = field.add(field.mul(a, s), field.mul(b, inv));
            let c = field.additive_char(arg);
            if twist {
                c * field.eta_total(s) as f64
            } else {
                c
            }
        })
        .sum()
}

fn weil_bound(field: &FiniteField, a: FieldElement, b: FieldElement) -> Option<f64> {
    (!(a.is_zero() && b.is_zero())).then(|| 2.0 * (field.order() as f64).sqrt())
}

/// K(a, b) = sum over s != 0 of chi(a s + b / s).
pub fn kloosterman(field: &FiniteField, a: FieldElement, b: FieldElement) -> CharSumRecord {
    CharSumRecord::new(
        SumKind::Kloosterman,
        Some(a.0),
        Some(b.0),
        twisted_sum(field, a, b, false),
        weil_bound(field, a, b),
    )
}

/// S(a, b) = sum over s != 0 of chi(a s + b / s) eta(s).
pub fn salie(field: &FiniteField, a: FieldElement, b: FieldElement) -> CharSumRecord {
    CharSumRecord::new(
        SumKind::Salie,
        Some(a.0),
        Some(b.0),
        twisted_sum(field, a, b, true),
        weil_bound(field, a, b),
    )
}

/// Every sum for the field: the Gauss sum, then K and S for all (a, b).
pub fn all_sums(field: &FiniteField) -> Vec<CharSumRecord> {
    let mut out = vec![gauss_sum(field)];
    for kind in [SumKind::Kloosterman, SumKind::Salie] {
        for a in field.elements() {
            for b in field.elements() {
                out.push(match kind {
                    SumKind::Kloosterman => kloosterman(field, a, b),
                    _ => salie(field, a, b),
                });
            }
        }
    }
    out
}

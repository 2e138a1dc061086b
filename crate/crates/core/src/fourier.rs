//! Normalized Fourier analysis on F_q^d.
//!
//! The physical side carries averages and the frequency side plain sums:
//! `f^(xi) = E_x f(x) chi(x . xi)` and `f(x) = sum_xi f^(xi) chi(-x . xi)`.
//! Both directions factor into d one-coordinate passes of a q x q
//! character matrix.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::char_sums::gauss_sum_value;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FiniteField};
use crate::geometry::{PointSet, Space, SphereIndex, Vector};
use crate::harness::report::fixed17;

/// Fields up to this order use a precomputed character matrix.
const MATRIX_MAX_Q: u32 = 1024;

/// Absolute slack on the distance-theorem inequality.
pub const DISTANCE_TOLERANCE: f64 = 1e-9;

/// A complex-valued function on F_q^d, on the physical or frequency side.
#[derive(Clone, Debug)]
pub struct FunctionTable {
    space: Space,
    values: Vec<Complex64>,
    spectrum: bool,
}

impl FunctionTable {
    pub fn physical(space: Space, values: Vec<Complex64>) -> Result<Self> {
        Self::with_side(space, values, false)
    }

    pub fn spectral(space: Space, values: Vec<Complex64>) -> Result<Self> {
        Self::with_side(space, values, true)
    }

    fn with_side(space: Space, values: Vec<Complex64>, spectrum: bool) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::DimensionMismatch {
                expected: space.size(),
                found: values.len(),
            });
        }
        Ok(FunctionTable {
            space,
            values,
            spectrum,
        })
    }

    /// Tabulates `f` in ascending index order.
    pub fn from_fn(space: Space, f: impl FnMut(usize) -> Complex64) -> Self {
        let values = (0..space.size()).map(f).collect();
        FunctionTable {
            space,
            values,
            spectrum: false,
        }
    }

    pub fn constant(space: Space, c: Complex64) -> Self {
        Self::from_fn(space, |_| c)
    }

    pub fn indicator(set: &PointSet) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); set.space().size()];
        for &m in set.members() {
            values[m as usize] = Complex64::new(1.0, 0.0);
        }
        FunctionTable {
            space: set.space().clone(),
            values,
            spectrum: false,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_spectrum(&self) -> bool {
        self.spectrum
    }

    /// E_x f(x).
    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// (E_x |f(x)|^2)^(1/2).
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.values.len() as f64).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn character_matrix(field: &FiniteField, conjugate: bool) -> Vec<Complex64> {
    let q = field.order();
    let mut m = Vec::with_capacity((q * q) as usize);
    for a in field.elements() {
        for b in field.elements() {
            let c = field.additive_char(field.mul(a, b));
            m.push(if conjugate { c.conj() } else { c });
        }
    }
    m
}

/// Applies `out[.., xi, ..] = sum_x chi(+-x xi) in[.., x, ..]` along every axis.
fn transform_axes(space: &Space, input: &[Complex64], conjugate: bool) -> Vec<Complex64> {
    let field = space.field();
    let q = field.order() as usize;
    let matrix = (field.order() <= MATRIX_MAX_Q).then(|| character_matrix(field, conjugate));
    let entry = |xi: usize, x: usize| -> Complex64 {
        match &matrix {
            Some(m) => m[xi * q + x],
            None => {
                let c =
                    field.additive_char(field.mul(FieldElement(xi as u32), FieldElement(x as u32)));
                if conjugate {
                    c.conj()
                } else {
                    c
                }
            }
        }
    };

    let mut current = input.to_vec();
    let mut next = vec![Complex64::new(0.0, 0.0); current.len()];
    for axis in 0..space.dim() {
        let stride = q.pow((space.dim() - 1 - axis) as u32);
        let block = q * stride;
        let src = &current;
        next.par_chunks_mut(block)
            .zip(src.par_chunks(block))
            .for_each(|(out, inp)| {
                for lo in 0..stride {
                    for xi in 0..q {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for x in 0..q {
                            acc += entry(xi, x) * inp[x * stride + lo];
                        }
                        out[xi * stride + lo] = acc;
                    }
                }
            });
        std::mem::swap(&mut current, &mut next);
    }
    current
}

/// f^(xi) = q^-d sum_x f(x) chi(x . xi).
pub fn fourier_transform(f: &FunctionTable) -> Result<FunctionTable> {
    if f.spectrum {
        return Err(Error::WrongSide(
            "forward transform expects a physical-side function",
        ));
    }
    let scale = 1.0 / f.space.size() as f64;
    let values = transform_axes(&f.space, &f.values, false)
        .into_iter()
        .map(|v| v * scale)
        .collect();
    Ok(FunctionTable {
        space: f.space.clone(),
        values,
        spectrum: true,
    })
}

/// f(x) = sum_xi f^(xi) chi(-x . xi).
pub fn inverse_transform(spectrum: &FunctionTable) -> Result<FunctionTable> {
    if !spectrum.spectrum {
        return Err(Error::WrongSide("inverse transform expects a spectrum"));
    }
    Ok(FunctionTable {
        space: spectrum.space.clone(),
        values: transform_axes(&spectrum.space, &spectrum.values, true),
        spectrum: false,
    })
}

/// E_y chi(l |y|^2 + y . xi) in closed form:
/// q^-d G^d chi(-|xi|^2 / 4l) eta(l)^d.
pub fn quadratic_phase_mean(space: &Space, ell: FieldElement, xi: &Vector) -> Result<Complex64> {
    let field = space.field();
    if ell.0 >= field.order() {
        return Err(Error::ElementOutOfRange {
            value: ell.0 as u64,
            q: field.order(),
        });
    }
    let eta = field.quadratic_char(ell)?;
    let norm = space.norm(xi)?;
    let four_ell = field.mul(field.from_integer(4), ell);
    let phase = field.neg(field.div(norm, four_ell)?);
    let d = space.dim() as i32;
    let g = gauss_sum_value(field);
    let q = field.order() as f64;
    let eta_d = if d % 2 == 0 { 1.0 } else { eta as f64 };
    Ok(g.powi(d) * q.powi(-d) * field.additive_char(phase) * eta_d)
}

/// h(u) = E_x f(x) g(x + u), computed through the spectrum
/// `xi -> f^(-xi) g^(xi)`.
pub fn correlation(f: &FunctionTable, g: &FunctionTable) -> Result<FunctionTable> {
    if f.spectrum || g.spectrum {
        return Err(Error::WrongSide(
            "correlation expects physical-side functions",
        ));
    }
    f.space.ensure_same(&g.space)?;
    let fh = fourier_transform(f)?;
    let gh = fourier_transform(g)?;
    let space = &f.space;
    let product = (0..space.size())
        .map(|xi| fh.values[space.neg_index(xi)] * gh.values[xi])
        .collect();
    inverse_transform(&FunctionTable {
        space: space.clone(),
        values: product,
        spectrum: true,
    })
}

fn check_bilinear_inputs(
    h: &FunctionTable,
    lambda: FieldElement,
    spheres: &SphereIndex,
) -> Result<()> {
    h.space.ensure_same(spheres.space())?;
    if lambda.0 >= h.space.field().order() {
        return Err(Error::ElementOutOfRange {
            value: lambda.0 as u64,
            q: h.space.field().order(),
        });
    }
    if lambda.is_zero() {
        return Err(Error::ZeroElement("the distance bilinear form"));
    }
    Ok(())
}

/// q^(1-d) sum over u in S_lambda of h(u), for a precomputed correlation h.
pub fn bilinear_from_correlation(
    h: &FunctionTable,
    lambda: FieldElement,
    spheres: &SphereIndex,
) -> Result<Complex64> {
    check_bilinear_inputs(h, lambda, spheres)?;
    let q = h.space.field().order() as f64;
    let sum: Complex64 = spheres
        .sphere(lambda)
        .iter()
        .map(|&u| h.values[u as usize])
        .sum();
    Ok(sum * q / h.space.size() as f64)
}

/// E_{x,y} f(x) g(y) sigma_lambda(x - y).
pub fn distance_bilinear(
    f: &FunctionTable,
    g: &FunctionTable,
    lambda: FieldElement,
    spheres: &SphereIndex,
) -> Result<Complex64> {
    check_bilinear_inputs(f, lambda, spheres)?;
    let h = correlation(f, g)?;
    bilinear_from_correlation(&h, lambda, spheres)
}

/// Deviation of the distance bilinear form from (E f)(E g) against
/// 2 q^(-(d-1)/2) ||f||_2 ||g||_2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceGap {
    pub q: u32,
    pub d: usize,
    pub lambda: u32,
    #[serde(serialize_with = "fixed17")]
    pub gap: f64,
    #[serde(serialize_with = "fixed17")]
    pub bound: f64,
    pub holds: bool,
}

fn gap_record(
    f: &FunctionTable,
    g: &FunctionTable,
    lambda: FieldElement,
    bilinear: Complex64,
) -> DistanceGap {
    let space = &f.space;
    let q = space.field().order();
    let d = space.dim();
    let gap = (bilinear - f.mean() * g.mean()).norm();
    let bound = 2.0 * (q as f64).powf(-((d as f64 - 1.0) / 2.0)) * f.l2_norm() * g.l2_norm();
    DistanceGap {
        q,
        d,
        lambda: lambda.0,
        gap,
        bound,
        holds: gap <= bound + DISTANCE_TOLERANCE,
    }
}

pub fn distance_theorem_gap(
    f: &FunctionTable,
    g: &FunctionTable,
    lambda: FieldElement,
    spheres: &SphereIndex,
) -> Result<DistanceGap> {
    let b = distance_bilinear(f, g, lambda, spheres)?;
    Ok(gap_record(f, g, lambda, b))
}

/// Gap records for every nonzero lambda, sharing one correlation.
pub fn distance_theorem_gaps(
    f: &FunctionTable,
    g: &FunctionTable,
    spheres: &SphereIndex,
) -> Result<Vec<DistanceGap>> {
    let h = correlation(f, g)?;
    h.space.ensure_same(spheres.space())?;
    f.space
        .field()
        .nonzero_elements()
        .map(|l| {
            Ok(gap_record(
                f,
                g,
                l,
                bilinear_from_correlation(&h, l, spheres)?,
            ))
        })
        .collect()
}

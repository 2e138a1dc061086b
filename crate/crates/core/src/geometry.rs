//! Vectors of F_q^d, lengths, spheres and point sets.
//!
//! Vectors are identified with their index in `[0, q^d)`: coordinate `x_0`
//! is the most significant base-q digit, so index order is lexicographic
//! order on coordinate tuples.

use std::fmt::Write as _;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec, FiniteField};

/// Default ceiling on q^d for anything that materializes all of F_q^d.
pub const DEFAULT_INDEX_BUDGET: u64 = 1 << 28;

/// A vector of F_q^d in coordinate form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector(pub Vec<FieldElement>);

impl Vector {
    pub fn from_values(values: &[u32]) -> Self {
        Vector(values.iter().copied().map(FieldElement).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// The ambient space F_q^d.
#[derive(Clone, Debug)]
pub struct Space {
    field: Arc<FiniteField>,
    d: usize,
    size: usize,
    /// place[j] = q^(d-1-j).
    place: Vec<usize>,
}

impl Space {
    pub fn new(field: Arc<FiniteField>, d: usize) -> Result<Self> {
        Self::with_budget(field, d, DEFAULT_INDEX_BUDGET)
    }

    pub fn with_budget(field: Arc<FiniteField>, d: usize, max_points: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "dimension must be at least 1".into(),
            ));
        }
        let q = field.order() as u128;
        let size = q.checked_pow(d as u32).unwrap_or(u128::MAX);
        if size > max_points as u128 || size > u32::MAX as u128 {
            return Err(Error::BudgetExceeded {
                what: "materializing F_q^d",
                required: size,
                budget: max_points as u128,
            });
        }
        let size = size as usize;
        let q = q as usize;
        let place = (0..d).map(|j| q.pow((d - 1 - j) as u32)).collect();
        Ok(Space {
            field,
            d,
            size,
            place,
        })
    }

    #[inline]
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FiniteField> {
        &self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    /// q^d.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn same_as(&self, other: &Space) -> bool {
        self.d == other.d
            && (Arc::ptr_eq(&self.field, &other.field)
                || (self.field.order() == other.field.order()
                    && self.field.modulus() == other.field.modulus()))
    }

    pub(crate) fn ensure_same(&self, other: &Space) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!(
                "F_{}^{} vs F_{}^{}",
                self.field.order(),
                self.d,
                other.field.order(),
                other.d
            )))
        }
    }

    fn check_vector(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: v.dim(),
            });
        }
        let q = self.field.order();
        if let Some(c) = v.0.iter().find(|c| c.0 >= q) {
            return Err(Error::ElementOutOfRange {
                value: c.0 as u64,
                q,
            });
        }
        Ok(())
    }

    pub fn index_of(&self, v: &Vector) -> Result<usize> {
        self.check_vector(v)?;
        Ok(self.encode(&v.0))
    }

    pub fn vector_at(&self, index: usize) -> Vector {
        let mut coords = vec![FieldElement::ZERO; self.d];
        self.decode_into(index, &mut coords);
        Vector(coords)
    }

    #[inline]
    pub fn decode_into(&self, index: usize, out: &mut [FieldElement]) {
        let q = self.field.order() as usize;
        let mut rest = index;
        for j in (0..self.d).rev() {
            out[j] = FieldElement((rest % q) as u32);
            rest /= q;
        }
    }

    #[inline]
    pub fn encode(&self, coords: &[FieldElement]) -> usize {
        let q = self.field.order() as usize;
        coords.iter().fold(0, |acc, c| acc * q + c.0 as usize)
    }

    /// Index of the coordinate-wise sum.
    pub fn add_index(&self, x: usize, y: usize) -> usize {
        let q = self.field.order() as usize;
        let mut out = 0;
        for &place in &self.place {
            let a = FieldElement(((x / place) % q) as u32);
            let b = FieldElement(((y / place) % q) as u32);
            out += self.field.add(a, b).0 as usize * place;
        }
        out
    }

    pub fn sub_index(&self, x: usize, y: usize) -> usize {
        let q = self.field.order() as usize;
        let mut out = 0;
        for &place in &self.place {
            let a = FieldElement(((x / place) % q) as u32);
            let b = FieldElement(((y / place) % q) as u32);
            out += self.field.sub(a, b).0 as usize * place;
        }
        out
    }

    pub fn neg_index(&self, x: usize) -> usize {
        let q = self.field.order() as usize;
        self.place
            .iter()
            .map(|&place| self.field.neg(FieldElement(((x / place) % q) as u32)).0 as usize * place)
            .sum()
    }

    pub fn dot_index(&self, x: usize, y: usize) -> FieldElement {
        let q = self.field.order() as usize;
        let f = &self.field;
        self.place.iter().fold(FieldElement::ZERO, |acc, &place| {
            let a = FieldElement(((x / place) % q) as u32);
            let b = FieldElement(((y / place) % q) as u32);
            f.add(acc, f.mul(a, b))
        })
    }

    pub fn norm_index(&self, x: usize) -> FieldElement {
        self.dot_index(x, x)
    }

    /// |x - y|^2, the distance between two indexed points.
    pub fn distance_index(&self, x: usize, y: usize) -> FieldElement {
        self.norm_index(self.sub_index(x, y))
    }

    pub fn dot(&self, v: &Vector, w: &Vector) -> Result<FieldElement> {
        self.check_vector(v)?;
        self.check_vector(w)?;
        let f = &self.field;
        Ok(v.0
            .iter()
            .zip(&w.0)
            .fold(FieldElement::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
    }

    /// The length |v|^2 = v . v.
    pub fn norm(&self, v: &Vector) -> Result<FieldElement> {
        self.dot(v, v)
    }

    /// The space's header token as used in point-set files.
    pub fn header(&self) -> String {
        format!("set q={} d={}", self.field.spec(), self.d)
    }
}

/// q^e as an exact rational (e may be negative).
pub(crate) fn q_power(q: u32, e: i64) -> BigRational {
    let base = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::from(1), base)
    }
}

/// A subset A of F_q^d.
#[derive(Clone, Debug)]
pub struct PointSet {
    space: Space,
    bits: FixedBitSet,
    members: Vec<u32>,
}

impl PointSet {
    pub fn from_indices(space: Space, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(space.size());
        for i in indices {
            if i >= space.size() {
                return Err(Error::InvalidArgument(format!(
                    "point index {i} is outside [0, {})",
                    space.size()
                )));
            }
            bits.insert(i);
        }
        Ok(Self::from_bits(space, bits))
    }

    pub(crate) fn from_bits(space: Space, bits: FixedBitSet) -> Self {
        let members = bits.ones().map(|i| i as u32).collect();
        PointSet {
            space,
            bits,
            members,
        }
    }

    pub fn full(space: Space) -> Self {
        let mut bits = FixedBitSet::with_capacity(space.size());
        bits.insert_range(..);
        Self::from_bits(space, bits)
    }

    pub fn empty(space: Space) -> Self {
        let bits = FixedBitSet::with_capacity(space.size());
        Self::from_bits(space, bits)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    /// Members in ascending index order.
    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// alpha = |A| q^-d exactly.
    pub fn density_exact(&self) -> BigRational {
        BigRational::new(BigInt::from(self.len()), BigInt::from(self.space.size()))
    }

    pub fn density(&self) -> f64 {
        self.len() as f64 / self.space.size() as f64
    }

    /// Serializes to the point-set text format.
    pub fn to_text(&self) -> String {
        let mut out = self.space.header();
        out.push('\n');
        for &m in &self.members {
            writeln!(out, "{m}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `set q=... d=...` header"))?;
        let mut tokens = header.split_whitespace();
        if tokens.next() != Some("set") {
            return Err(Error::parse(hline + 1, "header must start with `set`"));
        }
        let (mut spec, mut d) = (None, None);
        for tok in tokens {
            match tok.split_once('=') {
                Some(("q", v)) => spec = Some(v.parse::<FieldSpec>()?),
                Some(("d", v)) => {
                    d = Some(
                        v.parse::<usize>()
                            .map_err(|e| Error::parse(hline + 1, e.to_string()))?,
                    )
                }
                _ => return Err(Error::parse(hline + 1, format!("unexpected token {tok:?}"))),
            }
        }
        let spec = spec.ok_or_else(|| Error::parse(hline + 1, "header lacks q="))?;
        let d = d.ok_or_else(|| Error::parse(hline + 1, "header lacks d="))?;
        let space = Space::new(Arc::new(spec.build()?), d)?;
        let mut bits = FixedBitSet::with_capacity(space.size());
        for (i, line) in lines {
            let idx: usize = line
                .trim()
                .parse()
                .map_err(|e| Error::parse(i + 1, format!("bad index: {e}")))?;
            if idx >= space.size() {
                return Err(Error::parse(i + 1, format!("index {idx} out of range")));
            }
            if bits.put(idx) {
                return Err(Error::parse(i + 1, format!("duplicate index {idx}")));
            }
        }
        Ok(Self::from_bits(space, bits))
    }
}

/// All vectors of F_q^d partitioned by length.
#[derive(Clone, Debug)]
pub struct SphereIndex {
    space: Space,
    /// Members of sphere lambda are members[offsets[lambda]..offsets[lambda + 1]].
    offsets: Vec<usize>,
    members: Vec<u32>,
}

impl SphereIndex {
    pub fn build(space: &Space) -> Result<Self> {
        Self::build_with_budget(space, DEFAULT_INDEX_BUDGET)
    }

    pub fn build_with_budget(space: &Space, max_points: u64) -> Result<Self> {
        if space.size() as u64 > max_points {
            return Err(Error::BudgetExceeded {
                what: "sphere index",
                required: space.size() as u128,
                budget: max_points as u128,
            });
        }
        let f = space.field();
        let q = f.order() as usize;
        let d = space.dim();
        let squares: Vec<FieldElement> = f.elements().map(|a| f.square(a)).collect();

        // Odometer over coordinates; the running norm is recomputed from
        // per-position partial sums so each step touches only changed digits.
        let mut digits = vec![0usize; d];
        let mut partial = vec![FieldElement::ZERO; d + 1];
        let mut norms: Vec<u32> = Vec::with_capacity(space.size());
        for _ in 0..space.size() {
            norms.push(partial[d].0);
            let mut j = d;
            while j > 0 {
                j -= 1;
                digits[j] += 1;
                if digits[j] < q {
                    break;
                }
                digits[j] = 0;
            }
            for t in j..d {
                partial[t + 1] = f.add(partial[t], squares[digits[t]]);
            }
        }

        let mut offsets = vec![0usize; q + 1];
        for &n in &norms {
            offsets[n as usize + 1] += 1;
        }
        for l in 0..q {
            offsets[l + 1] += offsets[l];
        }
        let mut cursor = offsets.clone();
        let mut members = vec![0u32; space.size()];
        for (idx, &n) in norms.iter().enumerate() {
            members[cursor[n as usize]] = idx as u32;
            cursor[n as usize] += 1;
        }
        Ok(SphereIndex {
            space: space.clone(),
            offsets,
            members,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Sorted indices of {x : |x|^2 = lambda}.
    pub fn sphere(&self, lambda: FieldElement) -> &[u32] {
        let l = lambda.0 as usize;
        &self.members[self.offsets[l]..self.offsets[l + 1]]
    }

    pub fn size(&self, lambda: FieldElement) -> usize {
        let l = lambda.0 as usize;
        self.offsets[l + 1] - self.offsets[l]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    fn check_lambda(&self, lambda: FieldElement) -> Result<()> {
        if lambda.0 >= self.space.field().order() {
            return Err(Error::ElementOutOfRange {
                value: lambda.0 as u64,
                q: self.space.field().order(),
            });
        }
        if lambda.is_zero() {
            return Err(Error::ZeroElement("the sphere measure"));
        }
        if self.space.dim() < 2 {
            return Err(Error::InvalidArgument(
                "the sphere measure estimate needs d >= 2".into(),
            ));
        }
        Ok(())
    }

    /// E_x sigma_lambda(x) = q^(1-d) |S_lambda|.
    pub fn sigma_mean(&self, lambda: FieldElement) -> Result<f64> {
        self.check_lambda(lambda)?;
        let q = self.space.field().order() as f64;
        Ok(self.size(lambda) as f64 * q / self.space.size() as f64)
    }

    pub fn sigma_mean_exact(&self, lambda: FieldElement) -> Result<BigRational> {
        self.check_lambda(lambda)?;
        let q = self.space.field().order();
        Ok(BigRational::from_integer(BigInt::from(self.size(lambda)))
            * q_power(q, 1 - self.space.dim() as i64))
    }

    pub fn sigma_check(&self, lambda: FieldElement) -> Result<SigmaCheck> {
        let mean = self.sigma_mean(lambda)?;
        let q = self.space.field().order() as f64;
        let bound = q.powf(-((self.space.dim() as f64 - 1.0) / 2.0));
        let margin = (mean - 1.0).abs();
        Ok(SigmaCheck {
            lambda: lambda.0,
            size: self.size(lambda),
            mean,
            margin,
            bound,
            holds: margin <= bound + 1e-12,
        })
    }
}

/// Outcome of comparing E sigma_lambda against 1.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SigmaCheck {
    pub lambda: u32,
    pub size: usize,
    #[serde(serialize_with = "crate::harness::report::fixed17")]
    pub mean: f64,
    #[serde(serialize_with = "crate::harness::report::fixed17")]
    pub margin: f64,
    #[serde(serialize_with = "crate::harness::report::fixed17")]
    pub bound: f64,
    pub holds: bool,
}

/// Builds the sphere index for `space` (matches the `build_sphere_index` operation).
pub fn build_sphere_index(space: &Space) -> Result<SphereIndex> {
    SphereIndex::build(space)
}

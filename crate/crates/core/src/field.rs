//! Arithmetic in F_q for odd prime powers q = p^k.
//!
//! Elements are encoded as integers in `[0, q)`: the coefficient vector
//! `(c_0, ..., c_{k-1})` of the polynomial representative over F_p maps to
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Multiplication and inversion go
//! through exp/log tables built over a primitive element; addition is
//! digit-wise (tabulated for small q).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest field order accepted by [`FiniteField::new`].
pub const DEFAULT_MAX_Q: u64 = 1 << 16;

/// Fields up to this order keep a full addition table.
const ADD_TABLE_MAX_Q: u32 = 1024;

/// An element of F_q in its canonical base-p encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Textual description of a field: `p^k`, `p^k/c0,c1,...,ck`, or a bare
/// prime power `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    /// Modulus coefficients, low degree first, including the leading 1.
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FiniteField> {
        FiniteField::new(self.p, self.k, self.modulus.as_deref())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.k)?;
        if let Some(m) = &self.modulus {
            let coeffs: Vec<String> = m.iter().map(u32::to_string).collect();
            write!(f, "/{}", coeffs.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(format!("field spec {s:?}: {msg}"));
        let s = s.trim();
        let (order, modulus) = match s.split_once('/') {
            Some((o, m)) => (o, Some(m)),
            None => (s, None),
        };
        let (p, k) = match order.split_once('^') {
            Some((p, k)) => {
                let p: u32 = p.trim().parse().map_err(|e| bad(format!("{e}")))?;
                let k: u32 = k.trim().parse().map_err(|e| bad(format!("{e}")))?;
                (p, k)
            }
            None => {
                let q: u64 = order.trim().parse().map_err(|e| bad(format!("{e}")))?;
                prime_power_decompose(q).ok_or_else(|| bad(format!("{q} is not a prime power")))?
            }
        };
        let modulus = match modulus {
            Some(m) => Some(
                m.split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|e| bad(format!("{e}"))))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        Ok(FieldSpec { p, k, modulus })
    }
}

fn prime_power_decompose(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p as u32, k))
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomial helpers over F_p, coefficients low degree first.
mod poly {
    /// Remainder of `num` modulo the monic polynomial `den`.
    pub fn rem_monic(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
        let dd = den.len() - 1;
        let mut r: Vec<u64> = num.iter().map(|&c| c as u64).collect();
        let p64 = p as u64;
        if r.len() <= dd {
            return num.to_vec();
        }
        for i in (dd..r.len()).rev() {
            let c = r[i] % p64;
            if c == 0 {
                continue;
            }
            let shift = i - dd;
            for (j, &dc) in den.iter().enumerate() {
                r[shift + j] = (r[shift + j] + (p64 - c) * dc as u64) % p64;
            }
        }
        r.truncate(dd);
        r.into_iter().map(|c| (c % p64) as u32).collect()
    }

    /// Whether a monic polynomial of degree >= 1 has no monic factor of
    /// degree 1..=deg/2, checked by trial division.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        for fd in 1..=deg / 2 {
            let count = (p as u64).pow(fd as u32);
            for n in 0..count {
                let mut g = Vec::with_capacity(fd + 1);
                let mut m = n;
                for _ in 0..fd {
                    g.push((m % p as u64) as u32);
                    m /= p as u64;
                }
                g.push(1);
                if rem_monic(f, &g, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Lexicographically least monic irreducible polynomial of degree `k`,
    /// comparing coefficient tuples `(c_0, ..., c_{k-1})` with `c_0` first.
    pub fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
        let k = k as usize;
        let total = (p as u64).pow(k as u32);
        for n in 0..total {
            // c_0 is the most significant digit of n.
            let mut coeffs = vec![0u32; k + 1];
            let mut m = n;
            for i in (0..k).rev() {
                coeffs[i] = (m % p as u64) as u32;
                m /= p as u64;
            }
            coeffs[k] = 1;
            if is_irreducible(&coeffs, p) {
                return coeffs;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

/// The finite field F_q, q = p^k with p odd, with precomputed tables.
#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    default_modulus: bool,
    generator: u32,
    /// exp[i] = g^i for 0 <= i < 2(q-1).
    exp: Vec<u32>,
    /// log[a] for a != 0; log[0] is unused.
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u16>>,
    trace: Vec<u32>,
    /// exp(2 pi i t / p) for t in F_p.
    roots: Vec<Complex64>,
}

impl FiniteField {
    /// Builds F_{p^k}. When `modulus` is `None` and `k > 1`, the
    /// lexicographically least monic irreducible polynomial is used.
    pub fn new(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Self> {
        Self::with_limit(p, k, modulus, DEFAULT_MAX_Q)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    pub fn with_limit(p: u32, k: u32, modulus: Option<&[u32]>, max_q: u64) -> Result<Self> {
        if p.is_multiple_of(2) {
            return Err(Error::EvenCharacteristic(p as u64));
        }
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(Error::ZeroDegree);
        }
        let q_wide = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if q_wide > max_q as u128 || q_wide > u32::MAX as u128 {
            return Err(Error::FieldTooLarge {
                q: q_wide,
                limit: max_q,
            });
        }
        let q = q_wide as u32;

        let (modulus, default_modulus) = if k == 1 {
            if let Some(m) = modulus {
                // A degree-1 modulus t + c is accepted but carries no information.
                if m.len() != 2 || m[1] != 1 || m[0] >= p {
                    return Err(Error::InvalidModulus(format!(
                        "expected 2 coefficients ending in 1 for k = 1, got {m:?}"
                    )));
                }
            }
            (None, true)
        } else {
            let default = poly::least_irreducible(p, k);
            match modulus {
                None => (Some(default), true),
                Some(m) => {
                    if m.len() != k as usize + 1 {
                        return Err(Error::InvalidModulus(format!(
                            "expected {} coefficients for degree {k}, got {}",
                            k + 1,
                            m.len()
                        )));
                    }
                    if m[k as usize] != 1 {
                        return Err(Error::InvalidModulus("modulus must be monic".into()));
                    }
                    if let Some(&c) = m.iter().find(|&&c| c >= p) {
                        return Err(Error::InvalidModulus(format!(
                            "coefficient {c} is not reduced mod {p}"
                        )));
                    }
                    if !poly::is_irreducible(m, p) {
                        return Err(Error::InvalidModulus(format!(
                            "{m:?} is reducible over F_{p}"
                        )));
                    }
                    let is_default = m == default.as_slice();
                    (Some(m.to_vec()), is_default)
                }
            }
        };

        let mut field = FiniteField {
            p,
            k,
            q,
            modulus,
            default_modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
            neg: Vec::new(),
            add_table: None,
            trace: Vec::new(),
            roots: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = (q - 1) as u64;

        self.neg = (0..q).map(|a| self.slow_neg(a)).collect();
        if self.k > 1 && q <= ADD_TABLE_MAX_Q {
            let mut table = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    table.push(self.slow_add(a, b) as u16);
                }
            }
            self.add_table = Some(table);
        }

        let factors = prime_factors(order);
        let generator = (2..q)
            .chain(std::iter::once(1))
            .find(|&g| factors.iter().all(|&r| self.slow_pow(g, order / r) != 1))
            .expect("F_q^* is cyclic");
        self.generator = generator;

        let n = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * n);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp.push(x);
            log[x as usize] = i as u32;
            x = self.slow_mul(x, generator);
        }
        debug_assert_eq!(x, 1);
        exp.extend_from_within(..n);
        self.exp = exp;
        self.log = log;

        self.trace = (0..q)
            .map(|a| {
                let mut sum = FieldElement::ZERO;
                let mut x = FieldElement(a);
                for _ in 0..self.k {
                    sum = self.add(sum, x);
                    x = self.pow(x, self.p as u64);
                }
                debug_assert!(sum.0 < self.p);
                sum.0
            })
            .collect();

        self.roots = (0..self.p)
            .map(|t| Complex64::from_polar(1.0, 2.0 * PI * t as f64 / self.p as f64))
            .collect();
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, ds: &[u32]) -> u32 {
        ds.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut x, mut y, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.k {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        out
    }

    fn slow_neg(&self, a: u32) -> u32 {
        let ds: Vec<u32> = self
            .digits(a)
            .into_iter()
            .map(|d| (self.p - d) % self.p)
            .collect();
        self.undigits(&ds)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        match &self.modulus {
            None => ((a as u64 * b as u64) % p) as u32,
            Some(m) => {
                let (da, db) = (self.digits(a), self.digits(b));
                let mut prod = vec![0u32; da.len() + db.len() - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
                    }
                }
                self.undigits(&poly::rem_monic(&prod, m, self.p))
            }
        }
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients (low degree first, monic), absent for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    /// The primitive element the exp/log tables are built on.
    pub fn generator(&self) -> FieldElement {
        FieldElement(self.generator)
    }

    /// Canonical spec; the modulus appears only when it differs from the default.
    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            k: self.k,
            modulus: if self.default_modulus {
                None
            } else {
                self.modulus.clone()
            },
        }
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.q as u64 {
            return Err(Error::ElementOutOfRange { value, q: self.q });
        }
        Ok(FieldElement(value as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(FieldElement)
    }

    /// Element with the given polynomial coefficients (low degree first).
    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.k as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidArgument(format!(
                "coefficients {coeffs:?} do not describe an element of F_{}",
                self.q
            )));
        }
        Ok(FieldElement(self.undigits(coeffs)))
    }

    pub fn coefficients(&self, a: FieldElement) -> Vec<u32> {
        self.digits(a.0)
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_integer(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        match &self.add_table {
            Some(t) => FieldElement(t[(a.0 * self.q + b.0) as usize] as u32),
            None => FieldElement(self.slow_add(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        FieldElement(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::ZeroElement("inversion"));
        }
        let n = self.q - 1;
        Ok(FieldElement(
            self.exp[((n - self.log[a.0 as usize]) % n) as usize],
        ))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        FieldElement(self.exp[l as usize])
    }

    /// Discrete logarithm to the base [`FiniteField::generator`].
    pub fn log(&self, a: FieldElement) -> Result<u32> {
        if a.0 == 0 {
            return Err(Error::ZeroElement("discrete logarithm"));
        }
        Ok(self.log[a.0 as usize])
    }

    /// Tr(a) = a + a^p + ... + a^{p^{k-1}}, an element of the prime subfield.
    #[inline]
    pub fn trace(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.trace[a.0 as usize])
    }

    /// The canonical additive character exp(2 pi i Tr(a) / p).
    #[inline]
    pub fn additive_char(&self, a: FieldElement) -> Complex64 {
        self.roots[self.trace[a.0 as usize] as usize]
    }

    /// The quadratic character on F_q^*: +1 on squares, -1 otherwise.
    pub fn quadratic_char(&self, a: FieldElement) -> Result<i8> {
        if a.0 == 0 {
            return Err(Error::ZeroElement("the quadratic character"));
        }
        Ok(self.eta_total(a))
    }

    /// Quadratic character extended by eta(0) = 0. Not exposed.
    #[inline]
    pub(crate) fn eta_total(&self, a: FieldElement) -> i8 {
        if a.0 == 0 {
            0
        } else if self.log[a.0 as usize].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Convenience wrapper matching the `make_field` operation.
pub fn make_field(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<FiniteField> {
    FiniteField::new(p, k, modulus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: u32) -> FieldElement {
        FieldElement(v)
    }

    fn small_fields() -> Vec<FiniteField> {
        let mut out = Vec::new();
        for p in [3u32, 5, 7, 11, 13] {
            let mut k = 1;
            while (p as u64).pow(k) <= 121 {
                out.push(FiniteField::new(p, k, None).unwrap());
                k += 1;
            }
        }
        out.push(FiniteField::new(3, 2, Some(&[2, 2, 1])).unwrap());
        out
    }

    #[test]
    fn f3_elements() {
        let f = FiniteField::prime(3).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.elements().map(|e| e.0).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn f9_default_modulus_is_t2_plus_1() {
        let f = FiniteField::new(3, 2, None).unwrap();
        assert_eq!(f.modulus(), Some(&[1, 0, 1][..]));
        let g = FiniteField::new(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(g.spec().to_string(), "3^2");
    }

    #[test]
    fn default_moduli_for_larger_degrees() {
        // A cubic is irreducible iff it has no root, so root search is an
        // independent check of the default choice.
        let f = FiniteField::new(3, 3, None).unwrap();
        let m = f.modulus().unwrap().to_vec();
        assert!(poly::is_irreducible(&m, 3));
        // Everything lexicographically smaller has a root in F_3.
        for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                for c2 in 0..3u32 {
                    let cand = vec![c0, c1, c2, 1];
                    if cand[..3] >= m[..3] {
                        continue;
                    }
                    let has_root =
                        (0..3u32).any(|x| (c0 + c1 * x + c2 * x * x + x * x * x) % 3 == 0);
                    assert!(has_root, "{cand:?} should be reducible");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            FiniteField::prime(2),
            Err(Error::EvenCharacteristic(2))
        ));
        assert!(matches!(FiniteField::prime(9), Err(Error::NotPrime(9))));
        assert!(matches!(
            FiniteField::new(3, 0, None),
            Err(Error::ZeroDegree)
        ));
        assert!(matches!(
            FiniteField::new(3, 11, None),
            Err(Error::FieldTooLarge { .. })
        ));
        // t^2 + 2 = (t - 1)(t + 1) over F_3.
        assert!(matches!(
            FiniteField::new(3, 2, Some(&[2, 0, 1])),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            FiniteField::new(3, 2, Some(&[1, 1])),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            FiniteField::new(3, 2, Some(&[1, 0, 2])),
            Err(Error::InvalidModulus(_))
        ));
    }

    #[test]
    fn field_spec_parsing() {
        let s: FieldSpec = "3^2".parse().unwrap();
        assert_eq!((s.p, s.k, s.modulus), (3, 2, None));
        let s: FieldSpec = "9".parse().unwrap();
        assert_eq!((s.p, s.k), (3, 2));
        let s: FieldSpec = "3^2/2,2,1".parse().unwrap();
        assert_eq!(s.modulus, Some(vec![2, 2, 1]));
        assert_eq!(s.to_string(), "3^2/2,2,1");
        assert_eq!(s.build().unwrap().spec(), s);
        assert!("12".parse::<FieldSpec>().is_err());
        assert!("3^x".parse::<FieldSpec>().is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            let q = f.order();
            for a in f.elements() {
                assert_eq!(f.add(a, FieldElement::ZERO), a);
                assert_eq!(f.mul(a, FieldElement::ONE), a);
                assert_eq!(f.mul(a, FieldElement::ZERO), FieldElement::ZERO);
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.mul(a, b).0, f.slow_mul(a.0, b.0), "q={q}");
                    if q <= 49 {
                        for c in f.elements() {
                            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn trace_examples() {
        let f3 = FiniteField::prime(3).unwrap();
        assert_eq!(f3.trace(fe(2)), fe(2));
        let f9 = FiniteField::new(3, 2, Some(&[1, 0, 1])).unwrap();
        // t is encoded as 0 + 1*3 = 3.
        let t = f9.from_coefficients(&[0, 1]).unwrap();
        assert_eq!(t, fe(3));
        assert_eq!(f9.trace(t), fe(0));
        assert_eq!(f9.trace(FieldElement::ONE), fe(2));
    }

    #[test]
    fn trace_is_linear_and_surjective() {
        for f in small_fields() {
            let p = f.characteristic();
            let mut hit = vec![false; p as usize];
            for a in f.elements() {
                let ta = f.trace(a);
                assert!(ta.0 < p);
                hit[ta.0 as usize] = true;
                for c in 0..p {
                    assert_eq!(
                        f.trace(f.mul(fe(c), a)),
                        f.mul(fe(c), ta),
                        "F_p-homogeneity"
                    );
                }
                for b in f.elements() {
                    assert_eq!(f.trace(f.add(a, b)), f.add(ta, f.trace(b)));
                }
            }
            assert!(hit.iter().all(|&h| h));
        }
    }

    #[test]
    fn additive_character_examples() {
        let f3 = FiniteField::prime(3).unwrap();
        assert!((f3.additive_char(fe(0)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((f3.additive_char(fe(1)) - w).norm() < 1e-15);
        let f9 = FiniteField::new(3, 2, Some(&[1, 0, 1])).unwrap();
        assert!((f9.additive_char(fe(3)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn additive_character_orthogonality() {
        for f in small_fields() {
            let q = f.order() as f64;
            for c in f.elements() {
                let s: Complex64 = f.elements().map(|a| f.additive_char(f.mul(c, a))).sum();
                let expect = if c.is_zero() { q } else { 0.0 };
                assert!((s.norm() - expect).abs() <= 1e-9 * q);
            }
            for a in f.elements() {
                for b in f.elements() {
                    let lhs = f.additive_char(f.add(a, b));
                    let rhs = f.additive_char(a) * f.additive_char(b);
                    assert!((lhs - rhs).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn quadratic_character_examples() {
        let f7 = FiniteField::prime(7).unwrap();
        assert_eq!(f7.quadratic_char(fe(3)).unwrap(), -1);
        let f3 = FiniteField::prime(3).unwrap();
        assert_eq!(f3.quadratic_char(fe(1)).unwrap(), 1);
        let f9 = FiniteField::new(3, 2, None).unwrap();
        assert_eq!(f9.quadratic_char(f9.neg(FieldElement::ONE)).unwrap(), 1);
        assert!(matches!(
            f9.quadratic_char(fe(0)),
            Err(Error::ZeroElement(_))
        ));
    }

    #[test]
    fn quadratic_character_properties() {
        for f in small_fields() {
            let q = f.order();
            let squares: std::collections::BTreeSet<_> =
                f.nonzero_elements().map(|a| f.square(a)).collect();
            let mut plus = 0;
            for a in f.nonzero_elements() {
                let eta = f.quadratic_char(a).unwrap();
                assert_eq!(eta == 1, squares.contains(&a));
                let euler = f.pow(a, ((q - 1) / 2) as u64);
                let euler_sign = if euler == FieldElement::ONE { 1 } else { -1 };
                assert!(euler == FieldElement::ONE || euler == f.neg(FieldElement::ONE));
                assert_eq!(eta, euler_sign);
                if eta == 1 {
                    plus += 1;
                }
                for b in f.nonzero_elements() {
                    assert_eq!(
                        f.quadratic_char(f.mul(a, b)).unwrap(),
                        eta * f.quadratic_char(b).unwrap()
                    );
                }
            }
            assert_eq!(plus, (q - 1) / 2);
        }
    }

    #[test]
    fn large_field_without_add_table() {
        // 3^7 = 2187 is past the add-table cutoff.
        let f = FiniteField::new(3, 7, None).unwrap();
        assert!(f.add_table.is_none());
        let a = fe(1234);
        let b = fe(777);
        assert_eq!(f.sub(f.add(a, b), b), a);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        let f = FiniteField::new(251, 2, None).unwrap();
        assert_eq!(f.order(), 251 * 251);
        let x = fe(40_000);
        assert_eq!(f.mul(x, f.inv(x).unwrap()), FieldElement::ONE);
    }
}

//! Exact arithmetic in GF(p^e) for p^e <= 2^16, plus tower extensions
//! GF(q^m) over a prime base field with Frobenius maps.
//!
//! Elements are stored as integers whose base-p digits are the coefficients
//! of the polynomial residue, low-order digit first. Multiplication and
//! division go through log/antilog tables built at construction time.

use serde::{Deserialize, Serialize};
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use thiserror::Error;

pub const MAX_FIELD_SIZE: u64 = 1 << 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("field size {0} exceeds 2^16")]
    TooLarge(u64),
    #[error("modulus must be monic of degree {expected}, with coefficients below {p}")]
    BadModulus { expected: u32, p: u32 },
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u32),
    #[error("element {0} does not generate the multiplicative group")]
    NotPrimitive(u32),
    #[error("value {value} is not a canonical element of a field with {q} elements")]
    ValueOutOfRange { value: u32, q: u32 },
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("no field of size {0} is supported")]
    UnsupportedSize(u64),
    #[error("tower base GF({0}) must be a prime field")]
    TowerBaseNotPrime(u32),
}

/// Element of a specific `FieldSpec`, tagged so cross-field arithmetic
/// is caught at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    field: u64,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Identifier of the field spec this element belongs to.
    pub fn field_id(&self) -> u64 {
        self.field
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Descriptor of GF(p^e): modulus, primitive element and the log/antilog
/// tables used by `mul`/`div`.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    alpha: u32,
    id: u64,
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// Serialized form: {"p": int, "e": int, "modulus": [ints low-first], "alpha": int}.
#[derive(Debug, Serialize, Deserialize)]
pub struct FieldSpecJson {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    pub alpha: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial helpers over GF(p); coefficients low-order first, values mod p.
mod poly {
    pub fn digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
        let mut out = vec![0u32; e as usize];
        for d in out.iter_mut() {
            *d = v % p;
            v /= p;
        }
        out
    }

    pub fn value(digits: &[u32], p: u32) -> u32 {
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * p as u64 + d as u64;
        }
        v as u32
    }

    pub fn deg(a: &[u32]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u64 + ai as u64 * bj as u64) % p as u64) as u32;
            }
        }
        out
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let md = deg(m).expect("monic modulus");
        let mut r = a.to_vec();
        while let Some(rd) = deg(&r) {
            if rd < md {
                break;
            }
            let c = r[rd];
            let shift = rd - md;
            for (i, &mi) in m.iter().enumerate().take(md + 1) {
                let sub = (c as u64 * mi as u64) % p as u64;
                let cur = r[shift + i] as u64;
                r[shift + i] = ((cur + p as u64 - sub % p as u64) % p as u64) as u32;
            }
        }
        r.truncate(md);
        r.resize(md.max(1), 0);
        r
    }
}

impl FieldSpec {
    /// Builds GF(p^e) with the given monic irreducible modulus and
    /// primitive element, checking both properties.
    pub fn new(p: u32, e: u32, modulus: Vec<u32>, alpha: u32) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e < 1 {
            return Err(FieldError::BadModulus { expected: e, p });
        }
        let q64 = (p as u64).checked_pow(e).ok_or(FieldError::TooLarge(u64::MAX))?;
        if q64 > MAX_FIELD_SIZE {
            return Err(FieldError::TooLarge(q64));
        }
        let q = q64 as u32;
        if modulus.len() != e as usize + 1
            || modulus[e as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(FieldError::BadModulus { expected: e, p });
        }
        if !Self::modulus_irreducible(&modulus, p, e) {
            return Err(FieldError::ReducibleModulus(p));
        }
        if alpha >= q {
            return Err(FieldError::ValueOutOfRange { value: alpha, q });
        }

        let mut spec = FieldSpec {
            p,
            e,
            q,
            modulus,
            alpha,
            id: 0,
            log: vec![0; q as usize],
            exp: vec![0; 2 * (q as usize - 1)],
        };
        spec.build_tables()?;
        let mut h = DefaultHasher::new();
        (spec.p, spec.e, &spec.modulus, spec.alpha).hash(&mut h);
        spec.id = h.finish();
        Ok(spec)
    }

    /// Trial division against every monic polynomial of degree <= e/2.
    fn modulus_irreducible(modulus: &[u32], p: u32, e: u32) -> bool {
        if e == 1 {
            return true;
        }
        for d in 1..=(e / 2) {
            // all monic polynomials of degree d, enumerated by their low coefficients
            let count = (p as u64).pow(d);
            for lo in 0..count {
                let mut div = poly::digits(lo as u32, p, d);
                div.push(1);
                let r = poly::rem(modulus, &div, p);
                if poly::deg(&r).is_none() {
                    return false;
                }
            }
        }
        true
    }

    fn build_tables(&mut self) -> Result<(), FieldError> {
        let ord = self.q as usize - 1;
        let alpha_digits = poly::digits(self.alpha, self.p, self.e);
        let mut cur = vec![0u32; self.e as usize];
        cur[0] = 1;
        let mut seen = vec![false; self.q as usize];
        for i in 0..ord {
            let v = poly::value(&cur, self.p);
            if v == 0 || seen[v as usize] {
                return Err(FieldError::NotPrimitive(self.alpha));
            }
            seen[v as usize] = true;
            self.exp[i] = v;
            self.exp[i + ord] = v;
            self.log[v as usize] = i as u32;
            cur = poly::rem(&poly::mul(&cur, &alpha_digits, self.p), &self.modulus, self.p);
        }
        // closing the cycle: alpha^(q-1) must come back to 1
        if poly::value(&cur, self.p) != 1 {
            return Err(FieldError::NotPrimitive(self.alpha));
        }
        Ok(())
    }

    /// Canonical field of the given size. GF(256) uses the DVB polynomial
    /// x^8+x^4+x^3+x^2+1; GF(16) uses x^4+x+1; GF(8) uses x^3+x+1. Other
    /// sizes take the lexicographically first irreducible modulus and the
    /// smallest primitive element.
    pub fn gf(q: u64) -> Result<FieldSpec, FieldError> {
        if q > MAX_FIELD_SIZE {
            return Err(FieldError::TooLarge(q));
        }
        let (p, e) = factor_prime_power(q).ok_or(FieldError::UnsupportedSize(q))?;
        match (p, e) {
            (2, 3) => return FieldSpec::new(2, 3, vec![1, 1, 0, 1], 2),
            (2, 4) => return FieldSpec::new(2, 4, vec![1, 1, 0, 0, 1], 2),
            (2, 8) => return FieldSpec::new(2, 8, vec![1, 0, 1, 1, 1, 0, 0, 0, 1], 2),
            _ => {}
        }
        if e == 1 {
            let modulus = vec![0, 1];
            for a in 2..p {
                if let Ok(spec) = FieldSpec::new(p, 1, modulus.clone(), a) {
                    return Ok(spec);
                }
            }
            // GF(2): the only candidate generator is 1
            return FieldSpec::new(p, 1, modulus, 1);
        }
        let count = (p as u64).pow(e);
        for lo in 0..count {
            let mut modulus = poly::digits(lo as u32, p, e);
            modulus.push(1);
            if !Self::modulus_irreducible(&modulus, p, e) {
                continue;
            }
            for a in 2..q as u32 {
                if let Ok(spec) = FieldSpec::new(p, e, modulus.clone(), a) {
                    return Ok(spec);
                }
            }
        }
        Err(FieldError::UnsupportedSize(q))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn alpha(&self) -> FieldElement {
        self.elem(self.alpha)
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    pub(crate) fn elem(&self, value: u32) -> FieldElement {
        debug_assert!(value < self.q);
        FieldElement { value, field: self.id }
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if value >= self.q {
            return Err(FieldError::ValueOutOfRange { value, q: self.q });
        }
        Ok(self.elem(value))
    }

    pub fn owns(&self, x: FieldElement) -> bool {
        x.field == self.id
    }

    fn check(&self, x: FieldElement) -> u32 {
        assert!(x.field == self.id, "element from a different field");
        x.value
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (a, b) = (self.check(a), self.check(b));
        if self.p == 2 {
            return self.elem(a ^ b);
        }
        let da = poly::digits(a, self.p, self.e);
        let db = poly::digits(b, self.p, self.e);
        let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % self.p).collect();
        self.elem(poly::value(&sum, self.p))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let a = self.check(a);
        if self.p == 2 {
            return self.elem(a);
        }
        let da = poly::digits(a, self.p, self.e);
        let nd: Vec<u32> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        self.elem(poly::value(&nd, self.p))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (a, b) = (self.check(a), self.check(b));
        if a == 0 || b == 0 {
            return self.elem(0);
        }
        let idx = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.elem(self.exp[idx])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        let a = self.check(a);
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let ord = self.q - 1;
        let la = self.log[a as usize];
        Ok(self.elem(self.exp[((ord - la) % ord) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        let bv = self.check(b);
        if bv == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let av = self.check(a);
        if av == 0 {
            return Ok(self.elem(0));
        }
        let ord = self.q - 1;
        let idx = self.log[av as usize] + ord - self.log[bv as usize];
        Ok(self.elem(self.exp[idx as usize]))
    }

    /// x^n with the convention 0^0 = 1.
    pub fn pow(&self, x: FieldElement, n: u64) -> FieldElement {
        let v = self.check(x);
        if n == 0 {
            return self.elem(1);
        }
        if v == 0 {
            return self.elem(0);
        }
        let ord = (self.q - 1) as u64;
        let idx = (self.log[v as usize] as u64 * (n % ord)) % ord;
        self.elem(self.exp[idx as usize])
    }

    /// Checked entry point for the four basic operations; rejects mixed
    /// fields and division by zero instead of panicking.
    pub fn arith(
        &self,
        a: FieldElement,
        b: FieldElement,
        op: ArithOp,
    ) -> Result<FieldElement, FieldError> {
        if a.field != self.id || b.field != self.id {
            return Err(FieldError::SpecMismatch);
        }
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |v| self.elem(v))
    }

    pub fn to_json(&self) -> FieldSpecJson {
        FieldSpecJson {
            p: self.p,
            e: self.e,
            modulus: self.modulus.clone(),
            alpha: self.alpha,
        }
    }

    pub fn from_json(j: &FieldSpecJson) -> Result<FieldSpec, FieldError> {
        FieldSpec::new(j.p, j.e, j.modulus.clone(), j.alpha)
    }
}

fn factor_prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            return if rest == 1 { Some((p as u32, e)) } else { None };
        }
        p += 1;
    }
    Some((q as u32, 1))
}

/// GF(q^m) viewed as an m-dimensional vector space over the prime base
/// field GF(q), in the polynomial basis. Used for rank computations over
/// the base field and for Frobenius powers.
#[derive(Debug, Clone)]
pub struct TowerSpec {
    base: FieldSpec,
    ext: FieldSpec,
    m: u32,
}

impl TowerSpec {
    /// Canonical tower GF(q^m) over GF(q) for prime q.
    pub fn new(q: u32, m: u32) -> Result<TowerSpec, FieldError> {
        if !is_prime(q) {
            return Err(FieldError::TowerBaseNotPrime(q));
        }
        let base = FieldSpec::gf(q as u64)?;
        let ext = FieldSpec::gf((q as u64).pow(m))?;
        Ok(TowerSpec { base, ext, m })
    }

    /// Tower over the prime subfield of an explicitly constructed extension.
    pub fn over_prime(ext: FieldSpec) -> Result<TowerSpec, FieldError> {
        let base = FieldSpec::gf(ext.characteristic() as u64)?;
        let m = ext.degree();
        Ok(TowerSpec { base, ext, m })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn ext(&self) -> &FieldSpec {
        &self.ext
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.base.size()
    }

    /// Coordinates of x in the polynomial basis {1, beta, ..., beta^{m-1}}.
    pub fn expand(&self, x: FieldElement) -> Vec<FieldElement> {
        let v = self.ext.check(x);
        poly::digits(v, self.base.size(), self.m)
            .into_iter()
            .map(|d| self.base.elem(d))
            .collect()
    }

    pub fn fold(&self, coords: &[FieldElement]) -> FieldElement {
        assert_eq!(coords.len(), self.m as usize);
        let digits: Vec<u32> = coords.iter().map(|c| self.base.check(*c)).collect();
        self.ext.elem(poly::value(&digits, self.base.size()))
    }

    /// Embeds a base-field element into the extension.
    pub fn lift(&self, x: FieldElement) -> FieldElement {
        let v = self.base.check(x);
        self.ext.elem(v)
    }

    /// x^(q^j); negative j is the inverse Frobenius, realized as j mod m.
    pub fn frobenius(&self, x: FieldElement, j: i64) -> FieldElement {
        let v = self.ext.check(x);
        if v == 0 {
            return x;
        }
        let m = self.m as i64;
        let jm = j.rem_euclid(m) as u32;
        let ord = (self.ext.size() - 1) as u64;
        let qj = (self.base.size() as u64).pow(jm) % ord;
        let idx = (self.ext.log[v as usize] as u64 * qj) % ord;
        self.ext.elem(self.ext.exp[idx as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Schoolbook polynomial multiply-and-reduce, independent of the tables.
    fn naive_mul(spec: &FieldSpec, a: u32, b: u32) -> u32 {
        let p = spec.characteristic();
        let da = poly::digits(a, p, spec.degree());
        let db = poly::digits(b, p, spec.degree());
        let prod = poly::rem(&poly::mul(&da, &db, p), spec.modulus(), p);
        poly::value(&prod, p)
    }

    #[test]
    fn gf5_prime_arithmetic() {
        let f = FieldSpec::gf(5).unwrap();
        let r = f.mul(f.elem(2), f.elem(3));
        assert_eq!(r.value(), 1);
        assert_eq!(f.alpha().value(), 2);
    }

    #[test]
    fn gf16_mul_matches_schoolbook_oracle() {
        let f = FieldSpec::gf(16).unwrap();
        assert_eq!(f.mul(f.elem(8), f.elem(4)).value(), 6);
        for a in 0..16 {
            for b in 0..16 {
                assert_eq!(f.mul(f.elem(a), f.elem(b)).value(), naive_mul(&f, a, b));
            }
        }
    }

    #[test]
    fn gf16_div_matches_exhaustive_inverse() {
        let f = FieldSpec::gf(16).unwrap();
        assert_eq!(f.div(f.elem(1), f.elem(2)).unwrap().value(), 9);
        // oracle: the unique x with 2*x = 1
        let mut found = None;
        for x in 1..16 {
            if naive_mul(&f, 2, x) == 1 {
                found = Some(x);
            }
        }
        assert_eq!(found, Some(9));
    }

    #[test]
    fn division_by_zero_and_mixed_specs_rejected() {
        let f = FieldSpec::gf(16).unwrap();
        let g = FieldSpec::gf(8).unwrap();
        assert_eq!(f.div(f.one(), f.zero()), Err(FieldError::DivisionByZero));
        assert_eq!(
            f.arith(f.one(), g.one(), ArithOp::Add),
            Err(FieldError::SpecMismatch)
        );
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert_eq!(
            FieldSpec::new(2, 2, vec![1, 0, 1], 2).unwrap_err(),
            FieldError::ReducibleModulus(2)
        );
    }

    #[test]
    fn non_primitive_alpha_rejected() {
        // over GF(16) with x^4+x+1, element 6 = alpha^5 has order 3
        assert_eq!(
            FieldSpec::new(2, 4, vec![1, 1, 0, 0, 1], 6).unwrap_err(),
            FieldError::NotPrimitive(6)
        );
    }

    #[test]
    fn frobenius_examples_gf8() {
        let t = TowerSpec::new(2, 3).unwrap();
        let ext = t.ext();
        assert_eq!(t.frobenius(ext.elem(2), 1).value(), 4);
        assert_eq!(t.frobenius(ext.elem(3), 1).value(), 5);
        for x in ext.elements() {
            assert_eq!(t.frobenius(x, 0), x);
        }
    }

    #[test]
    fn frobenius_is_additive_multiplicative_and_invertible() {
        let t = TowerSpec::new(2, 4).unwrap();
        let ext = t.ext();
        for j in 0..4i64 {
            for a in ext.elements() {
                for b in ext.elements() {
                    assert_eq!(
                        t.frobenius(ext.add(a, b), j),
                        ext.add(t.frobenius(a, j), t.frobenius(b, j))
                    );
                    assert_eq!(
                        t.frobenius(ext.mul(a, b), j),
                        ext.mul(t.frobenius(a, j), t.frobenius(b, j))
                    );
                }
                assert_eq!(t.frobenius(t.frobenius(a, j), 4 - j), a);
            }
        }
    }

    #[test]
    fn fold_expand_round_trip() {
        let t = TowerSpec::new(2, 4).unwrap();
        for x in t.ext().elements() {
            assert_eq!(t.fold(&t.expand(x)), x);
        }
        let t5 = TowerSpec::new(5, 2).unwrap();
        for x in t5.ext().elements() {
            assert_eq!(t5.fold(&t5.expand(x)), x);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let f = FieldSpec::gf(256).unwrap();
        let j = serde_json::to_string(&f.to_json()).unwrap();
        let back = FieldSpec::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back.id(), f.id());
        assert_eq!(f.modulus(), &[1, 0, 1, 1, 1, 0, 0, 0, 1]);
    }
}

//! Finite fields `F_{p^k}` and polynomials over them.
//!
//! `F_{p^k}` is realized as `F_p[a]/(m(a))` where `m` is the
//! lexicographically first monic irreducible polynomial of degree `k`, so
//! the same `(p, k)` always produces the same model.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field size accepted.
pub const MAX_FIELD_SIZE: u64 = 1 << 40;

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    k: usize,
    /// Monic modulus, lowest coefficient first, length `k + 1`.
    modulus: Vec<u64>,
}

/// True when `n` is prime (trial division; inputs are small).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
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
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

impl FiniteField {
    /// The field with `p^k` elements.
    pub fn new(p: u64, k: usize) -> Result<Arc<FiniteField>> {
        if !is_prime(p) {
            return Err(Error::domain("p_prime", format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::domain("degree_positive", "extension degree must be >= 1"));
        }
        let size = (p as u128).checked_pow(k as u32);
        if size.map_or(true, |s| s > MAX_FIELD_SIZE as u128) {
            return Err(Error::resource(
                "MAX_FIELD_SIZE",
                format!("{p}^{k} exceeds {MAX_FIELD_SIZE}"),
            ));
        }
        if k == 1 {
            return Ok(Arc::new(FiniteField {
                p,
                k,
                modulus: vec![0, 1],
            }));
        }
        let prime = FiniteField::new(p, 1)?;
        // Enumerate monic polynomials of degree k in lexicographic order of
        // their coefficient vectors (constant term first).
        let total = p.pow(k as u32);
        for idx in 0..total {
            let mut coeffs = Vec::with_capacity(k + 1);
            let mut rest = idx;
            for _ in 0..k {
                coeffs.push(rest % p);
                rest /= p;
            }
            coeffs.push(1);
            if coeffs[0] == 0 {
                continue;
            }
            let poly = Poly::new(coeffs.iter().map(|&c| prime.from_u64(c)).collect());
            if poly.is_irreducible() {
                return Ok(Arc::new(FiniteField {
                    p,
                    k,
                    modulus: coeffs,
                }));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> Fe {
        Fe {
            field: Arc::clone(self),
            c: vec![0; self.k],
        }
    }

    pub fn one(self: &Arc<Self>) -> Fe {
        self.from_u64(1)
    }

    pub fn from_u64(self: &Arc<Self>, n: u64) -> Fe {
        let mut out = self.zero();
        out.c[0] = n % self.p;
        out
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> Fe {
        self.from_u64(n.rem_euclid(self.p as i64) as u64)
    }

    /// The class of the generator `a`.
    pub fn generator(self: &Arc<Self>) -> Fe {
        if self.k == 1 {
            return self.from_u64(0);
        }
        let mut out = self.zero();
        out.c[1] = 1;
        out
    }

    /// Element with the given coefficients in the basis `1, a, a^2, ...`.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: &[i64]) -> Result<Fe> {
        if coeffs.len() > self.k {
            return Err(Error::Dimension {
                expected: self.k,
                got: coeffs.len(),
            });
        }
        let mut out = self.zero();
        for (slot, &c) in out.c.iter_mut().zip(coeffs) {
            *slot = c.rem_euclid(self.p as i64) as u64;
        }
        Ok(out)
    }

    /// Element number `n` in a fixed enumeration of the field.
    pub fn element(self: &Arc<Self>, mut n: u64) -> Fe {
        let mut out = self.zero();
        for slot in out.c.iter_mut() {
            *slot = n % self.p;
            n /= self.p;
        }
        out
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = Fe> + '_ {
        (0..self.size()).map(move |n| self.element(n))
    }
}

/// JSON form of a field element: an integer in the prime field, or the
/// coefficient list in the basis `1, a, a^2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FeDoc {
    Prime(i64),
    Coeffs(Vec<i64>),
}

impl FiniteField {
    pub fn from_doc(self: &Arc<Self>, doc: &FeDoc) -> Result<Fe> {
        match doc {
            FeDoc::Prime(n) => Ok(self.from_i64(*n)),
            FeDoc::Coeffs(c) => self.from_coeffs(c),
        }
    }

    /// Parses `"3"` or `"1,2"` (coefficients of `1, a, ...`).
    pub fn parse_element(self: &Arc<Self>, text: &str) -> Result<Fe> {
        let coeffs: std::result::Result<Vec<i64>, _> = text
            .trim()
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect();
        let coeffs = coeffs.map_err(|e| Error::parse("field_element", format!("`{text}`: {e}")))?;
        self.from_coeffs(&coeffs)
    }
}

/// An element of a finite field.
#[derive(Clone, Debug)]
pub struct Fe {
    field: Arc<FiniteField>,
    c: Vec<u64>,
}

impl PartialEq for Fe {
    fn eq(&self, other: &Fe) -> bool {
        self.c == other.c && self.same_field(other)
    }
}

impl Eq for Fe {}

impl std::hash::Hash for Fe {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl Fe {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn to_doc(&self) -> FeDoc {
        match self.as_prime_field() {
            Some(n) if self.field.k == 1 => FeDoc::Prime(n as i64),
            _ => FeDoc::Coeffs(self.c.iter().map(|&x| x as i64).collect()),
        }
    }

    fn same_field(&self, other: &Fe) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    fn check(&self, other: &Fe) {
        assert!(self.same_field(other), "elements of different fields");
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    /// The integer value when the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        if self.c[1..].iter().all(|&x| x == 0) {
            Some(self.c[0])
        } else {
            None
        }
    }

    pub fn pow(&self, mut e: u128) -> Fe {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power, negative exponents allowed for nonzero elements.
    pub fn pow_i(&self, e: i64) -> Result<Fe> {
        if e >= 0 {
            Ok(self.pow(e as u128))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs() as u128))
        }
    }

    pub fn inv(&self) -> Result<Fe> {
        if self.is_zero() {
            return Err(Error::domain("nonzero", "zero has no inverse"));
        }
        Ok(self.pow(self.field.size() as u128 - 2))
    }

    /// `x -> x^p`.
    pub fn frobenius(&self) -> Fe {
        self.pow(self.field.p as u128)
    }

    /// Some square root, if one exists.
    pub fn sqrt(&self) -> Option<Fe> {
        self.field.elements().find(|x| &(x * x) == self)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let mut parts = Vec::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Add for &Fe {
    type Output = Fe;
    fn add(self, rhs: &Fe) -> Fe {
        self.check(rhs);
        let p = self.field.p;
        Fe {
            field: Arc::clone(&self.field),
            c: self
                .c
                .iter()
                .zip(&rhs.c)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        }
    }
}

impl Sub for &Fe {
    type Output = Fe;
    fn sub(self, rhs: &Fe) -> Fe {
        self.check(rhs);
        let p = self.field.p;
        Fe {
            field: Arc::clone(&self.field),
            c: self
                .c
                .iter()
                .zip(&rhs.c)
                .map(|(a, b)| (a + p - b) % p)
                .collect(),
        }
    }
}

impl Neg for &Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        let p = self.field.p;
        Fe {
            field: Arc::clone(&self.field),
            c: self.c.iter().map(|a| (p - a) % p).collect(),
        }
    }
}

impl Mul for &Fe {
    type Output = Fe;
    fn mul(self, rhs: &Fe) -> Fe {
        self.check(rhs);
        let f = &self.field;
        let p = f.p as u128;
        let k = f.k;
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u128 * b as u128) % p;
            }
        }
        for d in (k..prod.len()).rev() {
            let top = prod[d];
            if top == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in f.modulus[..k].iter().enumerate() {
                let sub = top * m as u128 % p;
                prod[d - k + i] = (prod[d - k + i] + p - sub) % p;
            }
        }
        Fe {
            field: Arc::clone(f),
            c: prod[..k].iter().map(|&x| x as u64).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Fe {
            type Output = Fe;
            fn $m(self, rhs: Fe) -> Fe {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        -&self
    }
}

/// A polynomial over a finite field, lowest coefficient first, without
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Arc<FiniteField>,
    coeffs: Vec<Fe>,
}

impl Poly {
    /// Builds a polynomial from a nonempty coefficient list.
    pub fn new(coeffs: Vec<Fe>) -> Poly {
        let field = Arc::clone(coeffs.first().expect("nonempty coefficient list").field());
        let mut p = Poly { field, coeffs };
        p.normalize();
        p
    }

    pub fn zero(field: &Arc<FiniteField>) -> Poly {
        Poly {
            field: Arc::clone(field),
            coeffs: Vec::new(),
        }
    }

    pub fn x(field: &Arc<FiniteField>) -> Poly {
        Poly::new(vec![field.zero(), field.one()])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Fe) -> Fe {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.field.zero();
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
            })
            .collect();
        let mut p = Poly {
            field: Arc::clone(&self.field),
            coeffs,
        };
        p.normalize();
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-&self.field.one()))
    }

    pub fn scale(&self, c: &Fe) -> Poly {
        let mut p = Poly {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        };
        p.normalize();
        p
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        let mut p = Poly {
            field: Arc::clone(&self.field),
            coeffs,
        };
        p.normalize();
        p
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.coeffs[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(&self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = &rem[i] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i - dd + j] = &rem[i - dd + j] - &(&c * dc);
            }
            quot[i - dd] = c;
        }
        let mut q = Poly {
            field: Arc::clone(&self.field),
            coeffs: quot,
        };
        let mut r = Poly {
            field: Arc::clone(&self.field),
            coeffs: rem,
        };
        q.normalize();
        r.normalize();
        (q, r)
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let mut p = Poly {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * &self.field.from_u64(i as u64 + 1))
                .collect(),
        };
        p.normalize();
        p
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::new(vec![self.field.one()]).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let q = self.field.size() as u128;
        let x = Poly::x(&self.field);
        let frob_iter = |times: usize| {
            let mut cur = x.clone();
            for _ in 0..times {
                cur = cur.powmod(q, self);
            }
            cur
        };
        if frob_iter(n).sub(&x).rem(self).is_zero() {
            for r in prime_factors(n as u64) {
                let h = frob_iter(n / r as usize).sub(&x);
                if self.gcd(&h).degree() != Some(0) {
                    return false;
                }
            }
            true
        } else {
            false
        }
    }

    /// Degrees of the distinct irreducible factors of a squarefree
    /// polynomial, via distinct-degree factorization.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut f = self.monic();
        let q = self.field.size() as u128;
        let x = Poly::x(&self.field);
        let mut h = x.clone();
        let mut i = 0;
        while f.degree().unwrap_or(0) > 0 {
            i += 1;
            if 2 * i > f.degree().unwrap() {
                out.push(f.degree().unwrap());
                break;
            }
            h = h.powmod(q, &f);
            let g = f.gcd(&h.sub(&x));
            let gd = g.degree().unwrap_or(0);
            if gd > 0 {
                out.extend(std::iter::repeat(i).take(gd / i));
                f = f.divrem(&g).0;
                h = h.rem(&f);
            }
        }
        out
    }

    /// The squarefree part `f / gcd(f, f')`. Fails when `f' = 0`.
    pub fn squarefree_part(&self) -> Option<Poly> {
        let d = self.derivative();
        if d.is_zero() {
            return if self.degree() == Some(0) {
                Some(self.clone())
            } else {
                None
            };
        }
        Some(self.divrem(&self.gcd(&d)).0.monic())
    }

    /// All roots with multiplicity when the polynomial splits into linear
    /// factors over its field. Otherwise the error reports the extension
    /// degree over which it would split.
    pub fn split_roots(&self) -> Result<Vec<Fe>> {
        let mut rest = self.monic();
        let mut roots = Vec::new();
        if rest.is_zero() {
            return Err(Error::domain("nonzero_polynomial", "the zero polynomial has no root list"));
        }
        for x in self.field.elements() {
            loop {
                if rest.degree() == Some(0) {
                    break;
                }
                if rest.eval(&x).is_zero() {
                    let lin = Poly::new(vec![-&x, self.field.one()]);
                    rest = rest.divrem(&lin).0;
                    roots.push(x.clone());
                } else {
                    break;
                }
            }
            if rest.degree() == Some(0) {
                return Ok(roots);
            }
        }
        let sq = rest.squarefree_part().ok_or_else(|| {
            Error::domain(
                "separable",
                format!("cannot factor {} (vanishing derivative)", rest),
            )
        })?;
        let lcm = sq.factor_degrees().into_iter().fold(1usize, |a, d| a.lcm(&d));
        Err(Error::ExtendField {
            p: self.field.p,
            k: self.field.k,
            needed: self.field.k * lcm,
            polynomial: self.to_string(),
        })
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = if self.field.k == 1 {
                c.to_string()
            } else {
                format!("({c})")
            };
            parts.push(match i {
                0 => coeff,
                1 if c.is_one() => "X".to_string(),
                1 => format!("{coeff}*X"),
                _ if c.is_one() => format!("X^{i}"),
                _ => format!("{coeff}*X^{i}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (p, k) in [(2, 1), (5, 1), (2, 3), (3, 2), (5, 2), (7, 3)] {
            let f = FiniteField::new(p, k).unwrap();
            assert_eq!(f.modulus().len(), k + 1);
            let elems: Vec<Fe> = f.elements().collect();
            assert_eq!(elems.len() as u64, f.size());
            for x in elems.iter().filter(|x| !x.is_zero()) {
                assert!((x * &x.inv().unwrap()).is_one());
                assert_eq!(x.pow(f.size() as u128 - 1), f.one());
            }
        }
    }

    #[test]
    fn multiplicative_group_is_cyclic() {
        let f = FiniteField::new(3, 2).unwrap();
        let has_generator = f.elements().filter(|x| !x.is_zero()).any(|g| {
            (1..8u128).all(|e| !g.pow(e).is_one())
        });
        assert!(has_generator);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(5, 0).is_err());
        assert!(FiniteField::new(7, 40).unwrap_err().is_resource());
    }

    #[test]
    fn roots_and_extension_hint() {
        let f = FiniteField::new(5, 1).unwrap();
        // (X - 1)(X - 2)^2
        let p = Poly::new(vec![f.from_i64(-4), f.from_u64(8), f.from_i64(-5), f.one()]);
        let mut roots: Vec<u64> = p
            .split_roots()
            .unwrap()
            .iter()
            .map(|r| r.as_prime_field().unwrap())
            .collect();
        roots.sort();
        assert_eq!(roots, vec![1, 2, 2]);
        // X^2 - 2 is irreducible mod 5.
        let q = Poly::new(vec![f.from_i64(-2), f.zero(), f.one()]);
        match q.split_roots() {
            Err(Error::ExtendField { needed, .. }) => assert_eq!(needed, 2),
            other => panic!("unexpected {other:?}"),
        }
        let f2 = FiniteField::new(5, 2).unwrap();
        let q2 = Poly::new(vec![f2.from_i64(-2), f2.zero(), f2.one()]);
        assert_eq!(q2.split_roots().unwrap().len(), 2);
    }

    #[test]
    fn factor_degrees_example() {
        let f = FiniteField::new(3, 1).unwrap();
        // (X^2 + 1)(X + 1) over F_3
        let a = Poly::new(vec![f.one(), f.zero(), f.one()]);
        let b = Poly::new(vec![f.one(), f.one()]);
        let mut d = a.mul(&b).factor_degrees();
        d.sort();
        assert_eq!(d, vec![1, 2]);
    }

    #[test]
    fn sqrt_and_display() {
        let f = FiniteField::new(5, 1).unwrap();
        let r = f.from_u64(4).sqrt().unwrap();
        assert_eq!((&r * &r).as_prime_field(), Some(4));
        assert!(f.from_u64(2).sqrt().is_none());
        let g = FiniteField::new(5, 2).unwrap();
        assert_eq!(g.from_coeffs(&[1, 3]).unwrap().to_string(), "3*a + 1");
    }
}

//! Laurent polynomials in `v` with `v^2 = q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A finitely supported element of `Z[v, v^-1]`. Zero coefficients are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentV {
    coeffs: BTreeMap<i32, i64>,
}

/// One `c * v^e` term, as serialized in JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VTerm {
    pub v: i32,
    pub c: i64,
}

impl LaurentV {
    pub fn zero() -> Self {
        LaurentV::default()
    }

    pub fn one() -> Self {
        LaurentV::monomial(0, 1)
    }

    pub fn constant(c: i64) -> Self {
        LaurentV::monomial(0, c)
    }

    /// `c * v^exp`.
    pub fn monomial(exp: i32, c: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(exp, c);
        }
        LaurentV { coeffs }
    }

    /// `c * q^exp = c * v^(2 exp)`.
    pub fn q_power(exp: i32, c: i64) -> Self {
        LaurentV::monomial(2 * exp, c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut out = LaurentV::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn add_term(&mut self, exp: i32, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert(0);
        *entry = entry.checked_add(c).expect("LaurentV coefficient overflow");
        if *entry == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn to_vterms(&self) -> Vec<VTerm> {
        self.terms().map(|(v, c)| VTerm { v, c }).collect()
    }

    pub fn from_vterms(terms: &[VTerm]) -> Self {
        LaurentV::from_terms(terms.iter().map(|t| (t.v, t.c)))
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentV {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// `v -> v^-1`.
    pub fn invert_variable(&self) -> Self {
        LaurentV {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return LaurentV::zero();
        }
        LaurentV {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, &c)| (e, c.checked_mul(k).expect("LaurentV coefficient overflow")))
                .collect(),
        }
    }

    /// True when every exponent is even, i.e. the element lies in `Z[q, q^-1]`.
    pub fn is_in_q(&self) -> bool {
        self.coeffs.keys().all(|e| e % 2 == 0)
    }

    /// True when there are no negative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.min_exponent().is_none_or(|e| e >= 0)
    }

    /// Value at `v = 1`.
    pub fn at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Evaluates at an integer `q`, provided only even powers of `v` occur
    /// and no negative power leaves the integers.
    pub fn eval_q(&self, q: i64) -> Option<i64> {
        let mut acc: i64 = 0;
        for (&e, &c) in &self.coeffs {
            if e % 2 != 0 || e < 0 {
                return None;
            }
            acc = acc.checked_add(c.checked_mul(q.checked_pow((e / 2) as u32)?)?)?;
        }
        Some(acc)
    }
}

impl fmt::Display for LaurentV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.coeffs.iter().rev() {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (e, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => write!(f, "v^{e}")?,
                _ => write!(f, "{a}*v^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentV {
    type Output = LaurentV;
    fn add(self, rhs: &LaurentV) -> LaurentV {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&LaurentV> for LaurentV {
    fn add_assign(&mut self, rhs: &LaurentV) {
        for (e, c) in rhs.terms() {
            self.add_term(e, c);
        }
    }
}

impl Sub for &LaurentV {
    type Output = LaurentV;
    fn sub(self, rhs: &LaurentV) -> LaurentV {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &LaurentV {
    type Output = LaurentV;
    fn neg(self) -> LaurentV {
        self.scale(-1)
    }
}

impl Mul for &LaurentV {
    type Output = LaurentV;
    fn mul(self, rhs: &LaurentV) -> LaurentV {
        let mut out = LaurentV::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1.checked_mul(c2).expect("LaurentV coefficient overflow"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_laurent() -> impl Strategy<Value = LaurentV> {
        proptest::collection::vec((-6i32..6, -20i64..20), 0..6).prop_map(LaurentV::from_terms)
    }

    #[test]
    fn basics() {
        let q = LaurentV::q_power(1, 1);
        assert_eq!(q.coeff(2), 1);
        let x = &q + &LaurentV::one();
        assert_eq!(x.eval_q(3), Some(4));
        assert_eq!(x.invert_variable().min_exponent(), Some(-2));
        assert!(!LaurentV::monomial(1, 1).is_in_q());
        assert_eq!(LaurentV::monomial(1, 1).eval_q(4), None);
        assert_eq!(format!("{}", &x - &LaurentV::monomial(1, 3)), "v^2 - 3*v^1 + 1");
        assert!((&x - &x).is_zero());
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b).at_one(), a.at_one() * b.at_one());
        }
    }
}

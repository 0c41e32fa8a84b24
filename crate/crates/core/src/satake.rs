//! The spherical Hecke algebra and the Satake transform.
//!
//! Elements of the Hecke algebra are written in the basis `c_lambda` of
//! characteristic functions of double cosets, with coefficients in
//! `Z[v, v^-1]`, `v^2 = q`. The Satake transform sends `c_lambda` to a
//! W-invariant combination of the irreducible characters `chi_mu`:
//!
//! ```text
//! S(c_lambda)   = sum_{mu <= lambda} b_lambda(mu) v^{2<rho,mu>} chi_mu
//! S^-1(chi_lambda) = v^{-2<rho,lambda>} sum_{mu <= lambda} d_lambda(mu) c_mu
//! ```
//!
//! The `d` side is read off from Lusztig's q-analogue of weight
//! multiplicity, `d_lambda(mu) = q^{<rho,lambda-mu>} K_{lambda,mu}(q^-1)`,
//! and the `b` side follows by a triangular solve.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::laurent::{LaurentV, VTerm};
use crate::root_data::{RootDatum, Weight};

/// Largest number of lattice points the Kostant partition table may visit.
pub const MAX_KOSTANT_BOX: usize = 2_000_000;

/// `sum_mu coeff_mu * e_mu` with Laurent polynomial coefficients. Used both
/// for Hecke elements (`e_mu = c_mu`) and for their Satake images
/// (`e_mu = chi_mu`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentCombination {
    pub terms: BTreeMap<Weight, LaurentV>,
}

impl LaurentCombination {
    pub fn zero() -> Self {
        LaurentCombination::default()
    }

    pub fn basis(lambda: Weight) -> Self {
        LaurentCombination::single(lambda, LaurentV::one())
    }

    pub fn single(lambda: Weight, c: LaurentV) -> Self {
        let mut out = LaurentCombination::zero();
        out.add_term(lambda, &c);
        out
    }

    pub fn add_term(&mut self, lambda: Weight, c: &LaurentV) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(lambda.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&lambda);
        }
    }

    pub fn add(&self, other: &LaurentCombination) -> LaurentCombination {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &LaurentV) -> LaurentCombination {
        let mut out = LaurentCombination::zero();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), &(x * c));
        }
        out
    }

    pub fn coeff(&self, lambda: &Weight) -> LaurentV {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A Hecke algebra element `sum coeff * c_lambda` for a named datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeElement {
    pub datum: String,
    pub combination: LaurentCombination,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LaurentTermDoc {
    pub weight: Vec<i64>,
    pub coeff: Vec<VTerm>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeckeElementDoc {
    pub datum: String,
    pub terms: Vec<LaurentTermDoc>,
}

/// JSON form of a Satake image: `{"terms": [{"weight": .., "coeff": ..}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LaurentCharacterDoc {
    pub terms: Vec<LaurentTermDoc>,
}

fn terms_doc(datum: &RootDatum, x: &LaurentCombination) -> Vec<LaurentTermDoc> {
    let mut keys: Vec<Weight> = x.terms.keys().cloned().collect();
    datum.sort_graded(&mut keys);
    keys.into_iter()
        .map(|k| LaurentTermDoc {
            coeff: x.terms[&k].to_vterms(),
            weight: k.coords,
        })
        .collect()
}

fn terms_from_doc(datum: &RootDatum, terms: &[LaurentTermDoc]) -> Result<LaurentCombination> {
    let mut out = LaurentCombination::zero();
    for (i, t) in terms.iter().enumerate() {
        let w = Weight::new(t.weight.clone());
        datum
            .check_weight(&w)
            .map_err(|e| Error::parse(format!("terms[{i}].weight"), e.to_string()))?;
        if !datum.is_dominant(&w)? {
            return Err(Error::domain(
                "dominant",
                format!("terms[{i}].weight {w} is not dominant"),
            ));
        }
        out.add_term(w, &LaurentV::from_vterms(&t.coeff));
    }
    Ok(out)
}

impl HeckeElement {
    pub fn new(datum: &RootDatum, combination: LaurentCombination) -> Self {
        HeckeElement {
            datum: datum.name().to_string(),
            combination,
        }
    }

    pub fn basis(datum: &RootDatum, lambda: Weight) -> Self {
        HeckeElement::new(datum, LaurentCombination::basis(lambda))
    }

    pub fn to_doc(&self, datum: &RootDatum) -> HeckeElementDoc {
        HeckeElementDoc {
            datum: self.datum.clone(),
            terms: terms_doc(datum, &self.combination),
        }
    }

    pub fn from_doc(datum: &RootDatum, doc: &HeckeElementDoc) -> Result<Self> {
        if doc.datum != datum.name() {
            return Err(Error::domain(
                "same_datum",
                format!("element is for `{}`, expected `{}`", doc.datum, datum.name()),
            ));
        }
        Ok(HeckeElement::new(datum, terms_from_doc(datum, &doc.terms)?))
    }
}

pub fn character_doc(datum: &RootDatum, x: &LaurentCombination) -> LaurentCharacterDoc {
    LaurentCharacterDoc {
        terms: terms_doc(datum, x),
    }
}

pub fn character_from_doc(datum: &RootDatum, doc: &LaurentCharacterDoc) -> Result<LaurentCombination> {
    terms_from_doc(datum, &doc.terms)
}

/// q-graded Kostant partition function: the number of ways of writing `beta`
/// as a sum of positive coroots, weighted by `q^{number of parts}`. The
/// result is a polynomial in `q`, stored with even `v`-exponents.
pub fn q_kostant(datum: &RootDatum, beta: &[i64]) -> Result<LaurentV> {
    if beta.len() != datum.rank() {
        return Err(Error::Dimension {
            expected: datum.rank(),
            got: beta.len(),
        });
    }
    let target = match datum.coroot_coordinates(beta) {
        Some(n) if n.iter().all(|&c| c >= 0) => n,
        _ => return Ok(LaurentV::zero()),
    };
    let parts: Vec<Vec<i64>> = datum
        .positive_coroots()
        .iter()
        .map(|c| datum.coroot_coordinates(c).expect("coroots lie in the coroot lattice"))
        .collect();
    kostant_table(&target, &parts)
}

fn kostant_table(target: &[i64], parts: &[Vec<i64>]) -> Result<LaurentV> {
    let dims: Vec<usize> = target.iter().map(|&n| n as usize + 1).collect();
    let size = dims
        .iter()
        .try_fold(1usize, |a, &d| a.checked_mul(d))
        .filter(|&s| s <= MAX_KOSTANT_BOX)
        .ok_or_else(|| {
            Error::resource(
                "MAX_KOSTANT_BOX",
                format!("partition table for {target:?} is too large"),
            )
        })?;
    let max_parts: usize = target.iter().map(|&n| n as usize).sum();
    // table[idx][j] = number of partitions of the point idx into j parts
    let mut table = vec![vec![0i64; max_parts + 1]; size];
    table[0][0] = 1;
    let strides: Vec<usize> = {
        let mut s = vec![1usize; dims.len()];
        for i in 1..dims.len() {
            s[i] = s[i - 1] * dims[i - 1];
        }
        s
    };
    let mut point = vec![0usize; dims.len()];
    for part in parts {
        let offset: usize = part
            .iter()
            .zip(&strides)
            .map(|(&p, &s)| p as usize * s)
            .sum();
        point.iter_mut().for_each(|x| *x = 0);
        for idx in 0..size {
            if idx > 0 {
                for (slot, d) in point.iter_mut().zip(&dims) {
                    *slot += 1;
                    if *slot < *d {
                        break;
                    }
                    *slot = 0;
                }
            }
            if point.iter().zip(part).any(|(&x, &p)| (x as i64) < p) {
                continue;
            }
            let (lo, hi) = table.split_at_mut(idx);
            let src = &lo[idx - offset];
            let dst = &mut hi[0];
            for j in 1..=max_parts {
                dst[j] += src[j - 1];
            }
        }
    }
    Ok(LaurentV::from_terms(
        table[size - 1]
            .iter()
            .enumerate()
            .map(|(j, &c)| (2 * j as i32, c)),
    ))
}

fn lusztig_with(
    datum: &RootDatum,
    lambda: &Weight,
    mu: &Weight,
    cache: &mut HashMap<Vec<i64>, LaurentV>,
) -> Result<LaurentV> {
    let two_rho = datum.two_rho_check();
    let top: Vec<i64> = lambda
        .coords
        .iter()
        .zip(two_rho)
        .map(|(a, r)| 2 * a + r)
        .collect();
    let bottom: Vec<i64> = mu
        .coords
        .iter()
        .zip(two_rho)
        .map(|(a, r)| 2 * a + r)
        .collect();
    let mut acc = LaurentV::zero();
    for w in &datum.weyl_group()?.elements {
        let moved = w.apply(&Weight::new(top.clone()));
        let diff: Vec<i64> = moved.coords.iter().zip(&bottom).map(|(a, b)| a - b).collect();
        if diff.iter().any(|d| d % 2 != 0) {
            continue;
        }
        let beta: Vec<i64> = diff.iter().map(|d| d / 2).collect();
        let k = match cache.get(&beta) {
            Some(k) => k.clone(),
            None => {
                let k = q_kostant(datum, &beta)?;
                cache.insert(beta, k.clone());
                k
            }
        };
        acc += &k.scale(w.sign);
    }
    Ok(acc)
}

/// Lusztig's q-analogue of weight multiplicity
/// `K_{lambda,mu}(q) = sum_w sign(w) P_q(w(lambda + rho) - (mu + rho))`.
pub fn lusztig_q_analog(datum: &RootDatum, lambda: &Weight, mu: &Weight) -> Result<LaurentV> {
    if !datum.leq(mu, lambda)? {
        return Err(Error::domain(
            "leq",
            format!("{mu} is not below {lambda}"),
        ));
    }
    lusztig_with(datum, lambda, mu, &mut HashMap::new())
}

/// Both triangular expansions, for a dominance-closed set of weights.
///
/// Rows are added on demand, so lookups for weights outside the current
/// set extend it.
#[derive(Clone, Debug)]
pub struct SatakeMatrices {
    datum: RootDatum,
    /// `lambda -> mu -> coefficient of chi_mu in S(c_lambda)`.
    forward: BTreeMap<Weight, BTreeMap<Weight, LaurentV>>,
    /// `lambda -> mu -> d_lambda(mu)`.
    d: BTreeMap<Weight, BTreeMap<Weight, LaurentV>>,
    kostant: HashMap<Vec<i64>, LaurentV>,
}

impl SatakeMatrices {
    pub fn new(datum: &RootDatum) -> Self {
        SatakeMatrices {
            datum: datum.clone(),
            forward: BTreeMap::new(),
            d: BTreeMap::new(),
            kostant: HashMap::new(),
        }
    }

    /// Builds the matrices for the closure of `cutoff` under
    /// `dominant_weights_below`.
    pub fn build(datum: &RootDatum, cutoff: &[Weight]) -> Result<Self> {
        let mut m = SatakeMatrices::new(datum);
        for lambda in cutoff {
            m.ensure(lambda)?;
        }
        Ok(m)
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    /// Weights currently covered, in graded order.
    pub fn lambda_list(&self) -> Vec<Weight> {
        let mut out: Vec<Weight> = self.d.keys().cloned().collect();
        self.datum.sort_graded(&mut out);
        out
    }

    /// Adds the rows for `lambda` and everything below it.
    pub fn ensure(&mut self, lambda: &Weight) -> Result<()> {
        if self.d.contains_key(lambda) {
            return Ok(());
        }
        let below = self.datum.dominant_weights_below(lambda)?;
        for nu in below.iter().rev() {
            if self.d.contains_key(nu) {
                continue;
            }
            self.add_row(nu)?;
        }
        Ok(())
    }

    fn add_row(&mut self, nu: &Weight) -> Result<()> {
        let datum = self.datum.clone();
        let below = datum.dominant_weights_below(nu)?;
        let r_nu = datum.rho_pairing_doubled(nu) as i32;
        let mut drow = BTreeMap::new();
        for mu in &below {
            let k = lusztig_with(&datum, nu, mu, &mut self.kostant)?;
            let r_mu = datum.rho_pairing_doubled(mu) as i32;
            let dval = k.invert_variable().shift(r_nu - r_mu);
            assert!(
                dval.is_polynomial() && dval.is_in_q(),
                "d_{nu}({mu}) = {dval} must be a polynomial in q"
            );
            if mu == nu {
                assert_eq!(dval, LaurentV::one(), "d_lambda(lambda) must be 1");
            }
            if !dval.is_zero() {
                drow.insert(mu.clone(), dval);
            }
        }
        // S(c_nu) = v^{r(nu)} chi_nu - sum_{mu < nu} d_nu(mu) S(c_mu)
        let mut frow = LaurentCombination::single(nu.clone(), LaurentV::monomial(r_nu, 1));
        for (mu, dval) in &drow {
            if mu == nu {
                continue;
            }
            let lower = &self.forward[mu];
            for (kappa, c) in lower {
                frow.add_term(kappa.clone(), &-&(dval * c));
            }
        }
        let b_top = frow.coeff(nu).shift(-r_nu);
        assert_eq!(b_top, LaurentV::one(), "b_lambda(lambda) must be 1");
        self.forward.insert(nu.clone(), frow.terms);
        self.d.insert(nu.clone(), drow);
        Ok(())
    }

    /// `b_lambda(mu)`, so that `S(c_lambda) = sum b_lambda(mu) v^{2<rho,mu>} chi_mu`.
    pub fn b(&mut self, lambda: &Weight, mu: &Weight) -> Result<LaurentV> {
        self.ensure(lambda)?;
        let r_mu = self.datum.rho_pairing_doubled(mu) as i32;
        Ok(self.forward[lambda]
            .get(mu)
            .map(|c| c.shift(-r_mu))
            .unwrap_or_default())
    }

    /// `d_lambda(mu)`, so that
    /// `S^-1(chi_lambda) = v^{-2<rho,lambda>} sum d_lambda(mu) c_mu`.
    pub fn d(&mut self, lambda: &Weight, mu: &Weight) -> Result<LaurentV> {
        self.ensure(lambda)?;
        Ok(self.d[lambda].get(mu).cloned().unwrap_or_default())
    }

    /// Satake image of a single basis element.
    pub fn satake_basis(&mut self, lambda: &Weight) -> Result<LaurentCombination> {
        self.ensure(lambda)?;
        Ok(LaurentCombination {
            terms: self.forward[lambda].clone(),
        })
    }

    /// `S^-1(chi_lambda)`.
    pub fn satake_inverse_basis(&mut self, lambda: &Weight) -> Result<LaurentCombination> {
        self.ensure(lambda)?;
        let r = self.datum.rho_pairing_doubled(lambda) as i32;
        let mut out = LaurentCombination::zero();
        for (mu, c) in &self.d[lambda] {
            out.add_term(mu.clone(), &c.shift(-r));
        }
        Ok(out)
    }

    fn require_datum(&self, h: &HeckeElement) -> Result<()> {
        if h.datum != self.datum.name() {
            return Err(Error::domain(
                "same_datum",
                format!("element is for `{}`, matrices for `{}`", h.datum, self.datum.name()),
            ));
        }
        Ok(())
    }

    pub fn satake(&mut self, h: &HeckeElement) -> Result<LaurentCombination> {
        self.require_datum(h)?;
        let mut out = LaurentCombination::zero();
        for (lambda, c) in &h.combination.terms {
            out = out.add(&self.satake_basis(lambda)?.scale(c));
        }
        Ok(out)
    }

    pub fn satake_inverse(&mut self, x: &LaurentCombination) -> Result<HeckeElement> {
        let mut out = LaurentCombination::zero();
        for (lambda, c) in &x.terms {
            out = out.add(&self.satake_inverse_basis(lambda)?.scale(c));
        }
        Ok(HeckeElement::new(&self.datum, out))
    }

    /// Convolution product, computed as `S^-1(S(h1) S(h2))`.
    pub fn hecke_multiply(&mut self, h1: &HeckeElement, h2: &HeckeElement) -> Result<HeckeElement> {
        self.require_datum(h1)?;
        self.require_datum(h2)?;
        let s1 = self.satake(h1)?;
        let s2 = self.satake(h2)?;
        let product = multiply_characters(&self.datum, &s1, &s2)?;
        self.satake_inverse(&product)
    }

    /// Substitutes `v -> sqrt_q`, after checking `sqrt_q^2 = q_value` and
    /// that `q_value` is a unit in the field.
    ///
    /// Replacing `sqrt_q` by `-sqrt_q` multiplies the coefficient of
    /// `chi_mu` in `S(c_lambda)` by `(-1)^{2<rho,mu>}`.
    pub fn specialize(&self, q_value: i64, sqrt_q: &Fe) -> Result<SpecializedSatake> {
        let field = sqrt_q.field();
        let p = field.characteristic() as i64;
        if q_value.rem_euclid(p) == 0 {
            return Err(Error::domain(
                "q_unit",
                format!("p = {p} divides q = {q_value}"),
            ));
        }
        if &(sqrt_q * sqrt_q) != &field.from_i64(q_value) {
            return Err(Error::domain(
                "sqrt_q",
                format!("({sqrt_q})^2 is not {q_value} in F_{p}^{}", field.degree()),
            ));
        }
        let v_inv = sqrt_q.inv()?;
        let eval = |x: &LaurentV| -> Fe {
            let mut acc = field.zero();
            for (e, c) in x.terms() {
                let base = if e >= 0 { sqrt_q.pow(e as u128) } else { v_inv.pow((-e) as u128) };
                acc = &acc + &(&base * &field.from_i64(c));
            }
            acc
        };
        let forward: BTreeMap<Weight, BTreeMap<Weight, Fe>> = self
            .forward
            .iter()
            .map(|(l, row)| (l.clone(), row.iter().map(|(m, c)| (m.clone(), eval(c))).collect()))
            .collect();
        let mut inverse = BTreeMap::new();
        for (l, row) in &self.d {
            let r = self.datum.rho_pairing_doubled(l) as i32;
            let srow: BTreeMap<Weight, Fe> =
                row.iter().map(|(m, c)| (m.clone(), eval(&c.shift(-r)))).collect();
            inverse.insert(l.clone(), srow);
        }
        let out = SpecializedSatake {
            field: Arc::clone(field),
            forward,
            inverse,
        };
        out.assert_inverse();
        Ok(out)
    }
}

/// The transform with `v` replaced by a square root of `q` in a finite field.
#[derive(Clone, Debug)]
pub struct SpecializedSatake {
    field: Arc<crate::field::FiniteField>,
    /// `lambda -> mu -> coefficient of chi_mu in S(c_lambda)`.
    pub forward: BTreeMap<Weight, BTreeMap<Weight, Fe>>,
    /// `lambda -> mu -> coefficient of c_mu in S^-1(chi_lambda)`.
    pub inverse: BTreeMap<Weight, BTreeMap<Weight, Fe>>,
}

/// A combination with finite-field coefficients.
pub type FieldCombination = BTreeMap<Weight, Fe>;

impl SpecializedSatake {
    fn apply(&self, m: &BTreeMap<Weight, BTreeMap<Weight, Fe>>, x: &FieldCombination) -> Result<FieldCombination> {
        let mut out: FieldCombination = BTreeMap::new();
        for (l, c) in x {
            let row = m.get(l).ok_or_else(|| {
                Error::domain("within_cutoff", format!("{l} is outside the specialized cutoff"))
            })?;
            for (mu, e) in row {
                let entry = out.entry(mu.clone()).or_insert_with(|| self.field.zero());
                *entry = &*entry + &(c * e);
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    pub fn satake(&self, h: &FieldCombination) -> Result<FieldCombination> {
        self.apply(&self.forward, h)
    }

    pub fn satake_inverse(&self, x: &FieldCombination) -> Result<FieldCombination> {
        self.apply(&self.inverse, x)
    }

    fn assert_inverse(&self) {
        for l in self.forward.keys() {
            let mut unit = FieldCombination::new();
            unit.insert(l.clone(), self.field.one());
            let back = self
                .satake_inverse(&self.satake(&unit).expect("closed cutoff"))
                .expect("closed cutoff");
            assert_eq!(back, unit, "specialized transform must stay invertible");
        }
    }
}

/// Specializes a Hecke element with the same substitution.
pub fn specialize_element(h: &LaurentCombination, sqrt_q: &Fe) -> Result<FieldCombination> {
    let field = sqrt_q.field();
    let v_inv = sqrt_q.inv()?;
    let mut out = FieldCombination::new();
    for (l, c) in &h.terms {
        let mut acc = field.zero();
        for (e, k) in c.terms() {
            let base = if e >= 0 { sqrt_q.pow(e as u128) } else { v_inv.pow((-e) as u128) };
            acc = &acc + &(&base * &field.from_i64(k));
        }
        if !acc.is_zero() {
            out.insert(l.clone(), acc);
        }
    }
    Ok(out)
}

/// Product of two characters with Laurent coefficients in the
/// representation ring.
pub fn multiply_characters(
    datum: &RootDatum,
    a: &LaurentCombination,
    b: &LaurentCombination,
) -> Result<LaurentCombination> {
    use crate::rep_ring::{multiply, VirtualCharacter};
    let mut out = LaurentCombination::zero();
    for (l1, c1) in &a.terms {
        for (l2, c2) in &b.terms {
            let prod = multiply(
                datum,
                &VirtualCharacter::irreducible(l1.clone()),
                &VirtualCharacter::irreducible(l2.clone()),
            )?;
            let c = c1 * c2;
            for (nu, n) in prod.terms {
                out.add_term(nu, &c.scale(n));
            }
        }
    }
    Ok(out)
}

/// All weights appearing in an element, for building a cutoff.
pub fn support(x: &LaurentCombination) -> BTreeSet<Weight> {
    x.terms.keys().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    fn w(v: &[i64]) -> Weight {
        Weight::from(v)
    }

    fn q(e: i32) -> LaurentV {
        LaurentV::q_power(e, 1)
    }

    #[test]
    fn kostant_examples() {
        let gl2 = RootDatum::gl(2).unwrap();
        assert_eq!(q_kostant(&gl2, &[1, -1]).unwrap(), q(1));
        assert_eq!(q_kostant(&gl2, &[2, -2]).unwrap(), q(2));
        assert_eq!(q_kostant(&gl2, &[-1, 1]).unwrap(), LaurentV::zero());
        assert_eq!(q_kostant(&gl2, &[0, 0]).unwrap(), LaurentV::one());
        assert_eq!(q_kostant(&gl2, &[1, 0]).unwrap(), LaurentV::zero());
        let gl3 = RootDatum::gl(3).unwrap();
        assert_eq!(q_kostant(&gl3, &[1, 0, -1]).unwrap(), &q(1) + &q(2));
        assert!(q_kostant(&gl3, &[1, 0]).is_err());
    }

    #[test]
    fn lusztig_examples() {
        let gl2 = RootDatum::gl(2).unwrap();
        assert_eq!(lusztig_q_analog(&gl2, &w(&[2, 0]), &w(&[1, 1])).unwrap(), q(1));
        assert_eq!(lusztig_q_analog(&gl2, &w(&[2, 0]), &w(&[2, 0])).unwrap(), LaurentV::one());
        let gl3 = RootDatum::gl(3).unwrap();
        assert_eq!(
            lusztig_q_analog(&gl3, &w(&[2, 1, 0]), &w(&[1, 1, 1])).unwrap(),
            &q(1) + &q(2)
        );
        assert!(lusztig_q_analog(&gl2, &w(&[1, 1]), &w(&[2, 0])).is_err());
    }

    #[test]
    fn gl2_matrices() {
        let gl2 = RootDatum::gl(2).unwrap();
        let mut m = SatakeMatrices::build(&gl2, &[w(&[2, 0])]).unwrap();
        assert_eq!(m.lambda_list(), vec![w(&[2, 0]), w(&[1, 1])]);
        assert_eq!(m.d(&w(&[2, 0]), &w(&[1, 1])).unwrap(), LaurentV::one());
        assert_eq!(m.b(&w(&[2, 0]), &w(&[1, 1])).unwrap(), LaurentV::constant(-1));
        let s = m.satake_basis(&w(&[2, 0])).unwrap();
        assert_eq!(s.coeff(&w(&[2, 0])), q(1));
        assert_eq!(s.coeff(&w(&[1, 1])), LaurentV::constant(-1));
        let s = m.satake_basis(&w(&[1, 0])).unwrap();
        assert_eq!(s, LaurentCombination::single(w(&[1, 0]), LaurentV::monomial(1, 1)));
        assert_eq!(
            m.satake_basis(&w(&[1, 1])).unwrap(),
            LaurentCombination::basis(w(&[1, 1]))
        );
        let inv = m.satake_inverse_basis(&w(&[2, 0])).unwrap();
        assert_eq!(inv.coeff(&w(&[2, 0])), q(-1));
        assert_eq!(inv.coeff(&w(&[1, 1])), q(-1));
    }

    #[test]
    fn gl2_products() {
        let gl2 = RootDatum::gl(2).unwrap();
        let mut m = SatakeMatrices::new(&gl2);
        let c = |v: &[i64]| HeckeElement::basis(&gl2, w(v));
        let p = m.hecke_multiply(&c(&[1, 0]), &c(&[1, 0])).unwrap();
        let mut expected = LaurentCombination::basis(w(&[2, 0]));
        expected.add_term(w(&[1, 1]), &(&q(1) + &LaurentV::one()));
        assert_eq!(p.combination, expected);
        assert_eq!(
            m.hecke_multiply(&c(&[1, 1]), &c(&[1, 0])).unwrap(),
            c(&[2, 1])
        );
        assert_eq!(m.hecke_multiply(&c(&[0, 0]), &c(&[2, 0])).unwrap(), c(&[2, 0]));
        let gl3 = RootDatum::gl(3).unwrap();
        assert!(m.hecke_multiply(&c(&[1, 0]), &HeckeElement::basis(&gl3, w(&[1, 0, 0]))).is_err());
    }

    #[test]
    fn round_trip_gsp4() {
        let gsp4 = RootDatum::gsp(4).unwrap();
        let mut m = SatakeMatrices::build(&gsp4, &[w(&[2, 2, 1]), w(&[3, 3, 3])]).unwrap();
        for l in m.lambda_list() {
            let h = HeckeElement::basis(&gsp4, l.clone());
            let s = m.satake(&h).unwrap();
            assert_eq!(m.satake_inverse(&s).unwrap(), h);
            assert_eq!(m.b(&l, &l).unwrap(), LaurentV::one());
        }
    }

    #[test]
    fn specialization() {
        let gl2 = RootDatum::gl(2).unwrap();
        let m = SatakeMatrices::build(&gl2, &[w(&[2, 0]), w(&[1, 0])]).unwrap();
        let f = FiniteField::new(5, 1).unwrap();
        let s2 = m.specialize(4, &f.from_u64(2)).unwrap();
        let s3 = m.specialize(4, &f.from_u64(3)).unwrap();
        assert_eq!(s2.forward[&w(&[1, 0])][&w(&[1, 0])], f.from_u64(2));
        assert_eq!(s3.forward[&w(&[1, 0])][&w(&[1, 0])], f.from_u64(3));
        assert_eq!(s2.forward[&w(&[2, 0])], s3.forward[&w(&[2, 0])]);
        assert!(m.specialize(5, &f.zero()).is_err());
        assert!(m.specialize(4, &f.from_u64(1)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let gl2 = RootDatum::gl(2).unwrap();
        let h = HeckeElement::new(
            &gl2,
            LaurentCombination::single(w(&[1, 0]), LaurentV::from_terms([(2, 1), (0, 1)])),
        );
        let s = serde_json::to_string(&h.to_doc(&gl2)).unwrap();
        assert_eq!(
            s,
            r#"{"datum":"gl2","terms":[{"weight":[1,0],"coeff":[{"v":0,"c":1},{"v":2,"c":1}]}]}"#
        );
        let back: HeckeElementDoc = serde_json::from_str(&s).unwrap();
        assert_eq!(HeckeElement::from_doc(&gl2, &back).unwrap(), h);
    }
}

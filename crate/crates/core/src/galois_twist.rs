//! Satake parameters over finite fields and central twists of Hecke
//! eigensystems.
//!
//! A point `s` of the dual torus over `F_{p^k}` is a homomorphism
//! `X_*(T) -> F^x`, stored by its values on the coordinate basis. A Hecke
//! eigensystem `Psi` assigns a field element to every `c_lambda` in a
//! dominance-closed set, and `omega(chi) = Psi(S^-1 chi)` is the associated
//! character of the representation ring.
//!
//! A character `eta` of `G` gives a central cocharacter `eta^` of the dual
//! group. Twisting by `eta^(q)` multiplies `chi_lambda` by `q^{<eta,lambda>}`
//! and `Psi(c_lambda)` by the same scalar; [`check_twist_theorem`] checks
//! both sides and that they agree.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::automorphic_weights::{depth, AutWeight, SignatureData};
use crate::error::{Error, Result};
use crate::field::{Fe, FeDoc, FiniteField, Poly};
use crate::rep_ring::weight_multiplicities;
use crate::root_data::{CharacterOfG, RootDatum, Weight};
use crate::satake::SatakeMatrices;

/// A point of the dual torus with coordinates in a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPoint {
    pub datum: String,
    pub coords: Vec<Fe>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusPointDoc {
    pub datum: String,
    pub p: u64,
    pub k: usize,
    pub coords: Vec<FeDoc>,
}

impl TorusPoint {
    pub fn new(datum: &RootDatum, coords: Vec<Fe>) -> Result<Self> {
        if coords.len() != datum.rank() {
            return Err(Error::Dimension {
                expected: datum.rank(),
                got: coords.len(),
            });
        }
        if let Some(i) = coords.iter().position(|c| c.is_zero()) {
            return Err(Error::domain("coords_nonzero", format!("coordinate {i} is zero")));
        }
        let f = coords[0].field();
        if coords.iter().any(|c| c.field() != f) {
            return Err(Error::domain("same_field", "coordinates lie in different fields"));
        }
        Ok(TorusPoint {
            datum: datum.name().to_string(),
            coords,
        })
    }

    /// A point with uniformly random nonzero coordinates.
    pub fn random<R: Rng>(datum: &RootDatum, field: &Arc<FiniteField>, rng: &mut R) -> Self {
        let coords = (0..datum.rank())
            .map(|_| field.element(rng.gen_range(1..field.size())))
            .collect();
        TorusPoint {
            datum: datum.name().to_string(),
            coords,
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        self.coords[0].field()
    }

    /// `s(mu) = prod_i coords_i^{mu_i}`.
    pub fn monomial(&self, mu: &Weight) -> Fe {
        let mut acc = self.field().one();
        for (c, &e) in self.coords.iter().zip(&mu.coords) {
            acc = &acc * &c.pow_i(e).expect("coordinates are nonzero");
        }
        acc
    }

    fn sort_key(&self) -> Vec<Vec<u64>> {
        self.coords.iter().map(|c| c.coeffs().to_vec()).collect()
    }

    pub fn to_doc(&self) -> TorusPointDoc {
        let f = self.field();
        TorusPointDoc {
            datum: self.datum.clone(),
            p: f.characteristic(),
            k: f.degree(),
            coords: self.coords.iter().map(Fe::to_doc).collect(),
        }
    }

    pub fn from_doc(datum: &RootDatum, doc: &TorusPointDoc) -> Result<Self> {
        require_datum_name(datum, &doc.datum)?;
        let f = FiniteField::new(doc.p, doc.k)?;
        let coords = doc
            .coords
            .iter()
            .map(|c| f.from_doc(c))
            .collect::<Result<Vec<_>>>()?;
        TorusPoint::new(datum, coords)
    }
}

fn require_datum_name(datum: &RootDatum, name: &str) -> Result<()> {
    if name != datum.name() {
        return Err(Error::domain(
            "same_datum",
            format!("object is for `{name}`, expected `{}`", datum.name()),
        ));
    }
    Ok(())
}

/// `chi_lambda(s)`, summing `mult * s(mu)` over all weights.
pub fn char_value(datum: &RootDatum, s: &TorusPoint, lambda: &Weight) -> Result<Fe> {
    require_datum_name(datum, &s.datum)?;
    let table = weight_multiplicities(datum, lambda)?;
    let f = s.field();
    let mut acc = f.zero();
    for (mu, m) in table.all_weights(datum) {
        acc = &acc + &(&s.monomial(&mu) * &f.from_u64(m));
    }
    Ok(acc)
}

/// The point `eta^(t) s`: every coordinate `c_i` becomes `t^{eta_i} c_i`.
pub fn twist_point(s: &TorusPoint, eta: &CharacterOfG, t: &Fe) -> Result<TorusPoint> {
    if t.is_zero() {
        return Err(Error::domain("t_nonzero", "twisting element must be nonzero"));
    }
    if eta.coords.len() != s.coords.len() {
        return Err(Error::Dimension {
            expected: s.coords.len(),
            got: eta.coords.len(),
        });
    }
    let coords = s
        .coords
        .iter()
        .zip(&eta.coords)
        .map(|(c, &e)| Ok(c * &t.pow_i(e)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(TorusPoint {
        datum: s.datum.clone(),
        coords,
    })
}

/// The Weyl orbit of a point, sorted and without repetitions.
pub fn point_orbit(datum: &RootDatum, s: &TorusPoint) -> Result<Vec<TorusPoint>> {
    require_datum_name(datum, &s.datum)?;
    let mut out: Vec<TorusPoint> = Vec::new();
    for w in &datum.weyl_group()?.elements {
        // (s o w)(e_j) = prod_i c_i^{M_ij}
        let coords = (0..datum.rank())
            .map(|j| {
                let mut acc = s.field().one();
                for (i, c) in s.coords.iter().enumerate() {
                    acc = &acc * &c.pow_i(w.matrix[i][j]).expect("coordinates are nonzero");
                }
                acc
            })
            .collect();
        out.push(TorusPoint {
            datum: s.datum.clone(),
            coords,
        });
    }
    out.sort_by_key(TorusPoint::sort_key);
    out.dedup();
    Ok(out)
}

/// `q^{<eta, lambda>}` in the field.
pub fn frobenius_scalar(
    datum: &RootDatum,
    eta: &CharacterOfG,
    lambda: &Weight,
    q_value: i64,
    field: &Arc<FiniteField>,
) -> Result<Fe> {
    let q = field.from_i64(q_value);
    if q.is_zero() {
        return Err(Error::domain(
            "q_unit",
            format!("p = {} divides q = {q_value}", field.characteristic()),
        ));
    }
    q.pow_i(datum.pairing(&eta.coords, lambda)?)
}

/// A Hecke eigensystem on a dominance-closed set of weights, together with
/// the specialization `v -> sqrt_q` it was computed under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenSystem {
    pub datum: String,
    pub q_value: i64,
    pub sqrt_q: Fe,
    pub values: BTreeMap<Weight, Fe>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenValueDoc {
    pub weight: Vec<i64>,
    pub value: FeDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenSystemDoc {
    pub datum: String,
    pub p: u64,
    pub k: usize,
    pub q: i64,
    pub sqrt_q: FeDoc,
    pub values: Vec<EigenValueDoc>,
}

impl EigenSystem {
    pub fn field(&self) -> &Arc<FiniteField> {
        self.sqrt_q.field()
    }

    pub fn to_doc(&self, datum: &RootDatum) -> EigenSystemDoc {
        let mut keys: Vec<Weight> = self.values.keys().cloned().collect();
        datum.sort_graded(&mut keys);
        let f = self.field();
        EigenSystemDoc {
            datum: self.datum.clone(),
            p: f.characteristic(),
            k: f.degree(),
            q: self.q_value,
            sqrt_q: self.sqrt_q.to_doc(),
            values: keys
                .into_iter()
                .map(|k| EigenValueDoc {
                    value: self.values[&k].to_doc(),
                    weight: k.coords,
                })
                .collect(),
        }
    }

    pub fn from_doc(datum: &RootDatum, doc: &EigenSystemDoc) -> Result<Self> {
        require_datum_name(datum, &doc.datum)?;
        let f = FiniteField::new(doc.p, doc.k)?;
        let mut values = BTreeMap::new();
        for (i, v) in doc.values.iter().enumerate() {
            let w = Weight::new(v.weight.clone());
            datum
                .check_weight(&w)
                .map_err(|e| Error::parse(format!("values[{i}].weight"), e.to_string()))?;
            if !datum.is_dominant(&w)? {
                return Err(Error::domain("dominant", format!("values[{i}].weight {w} is not dominant")));
            }
            values.insert(w, f.from_doc(&v.value)?);
        }
        Ok(EigenSystem {
            datum: doc.datum.clone(),
            q_value: doc.q,
            sqrt_q: f.from_doc(&doc.sqrt_q)?,
            values,
        })
    }

    /// A copy with `value` added to `Psi(c_lambda)`.
    pub fn perturbed(&self, lambda: &Weight, delta: &Fe) -> EigenSystem {
        let mut out = self.clone();
        if let Some(v) = out.values.get_mut(lambda) {
            *v = &*v + delta;
        }
        out
    }
}

/// `Psi(c_lambda) = sum_mu [S(c_lambda) : chi_mu] chi_mu(s)` for every
/// `lambda` in the closure of `lambdas`.
pub fn eigensystem_from_point(
    matrices: &mut SatakeMatrices,
    s: &TorusPoint,
    q_value: i64,
    sqrt_q: &Fe,
    lambdas: &[Weight],
) -> Result<EigenSystem> {
    let datum = matrices.datum().clone();
    require_datum_name(&datum, &s.datum)?;
    if sqrt_q.field() != s.field() {
        return Err(Error::domain("same_field", "sqrt_q and the point lie in different fields"));
    }
    let mut domain = std::collections::BTreeSet::new();
    for l in lambdas {
        matrices.ensure(l)?;
        domain.extend(datum.dominant_weights_below(l)?);
    }
    let spec = matrices.specialize(q_value, sqrt_q)?;
    let mut chi = BTreeMap::new();
    for mu in &domain {
        chi.insert(mu.clone(), char_value(&datum, s, mu)?);
    }
    let f = s.field();
    let mut values = BTreeMap::new();
    for l in &domain {
        let mut acc = f.zero();
        for (mu, c) in &spec.forward[l] {
            acc = &acc + &(c * &chi[mu]);
        }
        values.insert(l.clone(), acc);
    }
    let psi = EigenSystem {
        datum: datum.name().to_string(),
        q_value,
        sqrt_q: sqrt_q.clone(),
        values,
    };
    let omega = omega_values(matrices, &psi)?;
    for (l, v) in &omega {
        assert_eq!(v, &chi[l], "omega(chi_lambda) must equal chi_lambda(s)");
    }
    Ok(psi)
}

/// `omega(chi_lambda) = Psi(S^-1 chi_lambda)` for every `lambda` in the
/// domain of `psi`.
pub fn omega_values(matrices: &mut SatakeMatrices, psi: &EigenSystem) -> Result<BTreeMap<Weight, Fe>> {
    let datum = matrices.datum().clone();
    require_datum_name(&datum, &psi.datum)?;
    for l in psi.values.keys() {
        for mu in datum.dominant_weights_below(l)? {
            if !psi.values.contains_key(&mu) {
                return Err(Error::domain(
                    "closed_domain",
                    format!("eigensystem has {l} but not {mu}"),
                ));
            }
        }
        matrices.ensure(l)?;
    }
    let spec = matrices.specialize(psi.q_value, &psi.sqrt_q)?;
    let f = psi.field();
    let mut out = BTreeMap::new();
    for l in psi.values.keys() {
        let mut acc = f.zero();
        for (mu, c) in &spec.inverse[l] {
            acc = &acc + &(c * &psi.values[mu]);
        }
        out.insert(l.clone(), acc);
    }
    Ok(out)
}

fn gl_rank(datum: &RootDatum) -> Option<usize> {
    let gl = RootDatum::gl(datum.rank()).ok()?;
    (gl.simple_roots() == datum.simple_roots() && gl.simple_coroots() == datum.simple_coroots())
        .then_some(datum.rank())
}

/// Recovers the Weyl orbit of the Satake parameter of a `gl(n)`
/// eigensystem from the values on the fundamental weights.
pub fn point_from_eigensystem(matrices: &mut SatakeMatrices, psi: &EigenSystem) -> Result<Vec<TorusPoint>> {
    let datum = matrices.datum().clone();
    let n = gl_rank(&datum).ok_or_else(|| {
        Error::domain("datum_gl", format!("recovery needs gl(n), got {}", datum.name()))
    })?;
    let omega = omega_values(matrices, psi)?;
    let f = psi.field();
    // X^n - e_1 X^{n-1} + e_2 X^{n-2} - ...
    let mut coeffs = vec![f.zero(); n + 1];
    coeffs[n] = f.one();
    for i in 1..=n {
        let fund = Weight::new((0..n).map(|j| i64::from(j < i)).collect());
        let e = omega.get(&fund).ok_or_else(|| {
            Error::domain("fundamental_weights_present", format!("eigensystem lacks {fund}"))
        })?;
        coeffs[n - i] = if i % 2 == 0 { e.clone() } else { -e };
    }
    let poly = Poly::new(coeffs);
    let roots = poly.split_roots()?;
    if roots.iter().any(Fe::is_zero) {
        return Err(Error::domain(
            "det_nonzero",
            "recovered parameter has a zero coordinate",
        ));
    }
    let s = TorusPoint::new(&datum, roots)?;
    point_orbit(&datum, &s)
}

/// Outcome of [`check_twist_theorem`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistReport {
    /// `Psi_2(c_lambda) = q^{<eta,lambda>} Psi_1(c_lambda)` for all lambda.
    pub eigensystem_level: bool,
    pub eigensystem_failures: Vec<Vec<i64>>,
    /// `omega_2 = omega_{eta^(q) s_1}` on the domain, and the orbits agree
    /// when a second point is known.
    pub parameter_level: bool,
    pub parameter_failures: Vec<Vec<i64>>,
    pub orbit_comparison: Option<bool>,
    /// `chi_lambda(eta^(q) s_1) = q^{<eta,lambda>} chi_lambda(s_1)`.
    pub character_identity: bool,
    pub point_source: String,
    pub twisted_orbit: Vec<Vec<FeDoc>>,
    pub equivalent: bool,
}

impl TwistReport {
    pub fn all_pass(&self) -> bool {
        self.eigensystem_level && self.parameter_level && self.character_identity && self.equivalent
    }
}

/// Points to compare against when they cannot be recovered from the
/// eigensystems.
#[derive(Clone, Debug)]
pub struct KnownPoints {
    pub s1: TorusPoint,
    pub s2: Option<TorusPoint>,
}

/// Checks the eigensystem relation and the parameter relation for
/// `psi2` against the twist of `psi1` by `eta`, and that they agree.
pub fn check_twist_theorem(
    matrices: &mut SatakeMatrices,
    psi1: &EigenSystem,
    psi2: &EigenSystem,
    eta: &CharacterOfG,
    points: Option<&KnownPoints>,
) -> Result<TwistReport> {
    let datum = matrices.datum().clone();
    if psi1.q_value != psi2.q_value || psi1.sqrt_q != psi2.sqrt_q {
        return Err(Error::domain(
            "same_specialization",
            "eigensystems were specialized with different q or sqrt_q",
        ));
    }
    if psi1.values.keys().ne(psi2.values.keys()) {
        return Err(Error::domain("common_domain", "eigensystems have different domains"));
    }
    datum.character_from_coords(&eta.name, eta.coords.clone())?;
    let f = psi1.field().clone();
    let q_bar = f.from_i64(psi1.q_value);

    let mut eigensystem_failures = Vec::new();
    for (l, v1) in &psi1.values {
        let scalar = frobenius_scalar(&datum, eta, l, psi1.q_value, &f)?;
        if psi2.values[l] != &scalar * v1 {
            eigensystem_failures.push(l.coords.clone());
        }
    }

    let (s1, s2_orbit, point_source) = match points {
        Some(k) => {
            let s2 = match &k.s2 {
                Some(s2) => Some(point_orbit(&datum, s2)?),
                None => None,
            };
            (k.s1.clone(), s2, "provided")
        }
        None => {
            let orbit1 = point_from_eigensystem(matrices, psi1)?;
            let s2 = match point_from_eigensystem(matrices, psi2) {
                Ok(o) => Some(o),
                Err(Error::ExtendField { .. }) => None,
                Err(Error::Domain { precondition: "det_nonzero", .. }) => None,
                Err(e) => return Err(e),
            };
            (orbit1[0].clone(), s2, "recovered")
        }
    };

    let omega1 = omega_values(matrices, psi1)?;
    for (l, w) in &omega1 {
        if &char_value(&datum, &s1, l)? != w {
            return Err(Error::domain(
                "point_matches_eigensystem",
                format!("omega_1(chi_{l}) differs from chi_{l}(s_1)"),
            ));
        }
    }
    let twisted = twist_point(&s1, eta, &q_bar)?;
    let omega2 = omega_values(matrices, psi2)?;
    let mut parameter_failures = Vec::new();
    let mut character_identity = true;
    for (l, w) in &omega2 {
        let at_twist = char_value(&datum, &twisted, l)?;
        if &at_twist != w {
            parameter_failures.push(l.coords.clone());
        }
        let scalar = frobenius_scalar(&datum, eta, l, psi1.q_value, &f)?;
        if at_twist != &scalar * &omega1[l] {
            character_identity = false;
        }
    }
    let twisted_orbit = point_orbit(&datum, &twisted)?;
    let orbit_comparison = s2_orbit.as_ref().map(|o| *o == twisted_orbit);
    let eigensystem_level = eigensystem_failures.is_empty();
    let parameter_level = parameter_failures.is_empty() && orbit_comparison != Some(false);
    let equivalent = eigensystem_level == parameter_level;
    if !equivalent {
        return Err(Error::Inconsistent(format!(
            "eigensystem level {eigensystem_level} but parameter level {parameter_level}"
        )));
    }
    Ok(TwistReport {
        eigensystem_level,
        eigensystem_failures,
        parameter_level,
        parameter_failures,
        orbit_comparison,
        character_identity,
        point_source: point_source.to_string(),
        twisted_orbit: twisted_orbit
            .iter()
            .map(|s| s.coords.iter().map(Fe::to_doc).collect())
            .collect(),
        equivalent,
    })
}

/// `nu^{|kappa_0| / 2}` for an admissible `kappa_0`.
pub fn theta_twist_character(
    sig: &SignatureData,
    kappa0: &AutWeight,
    nu: &CharacterOfG,
) -> Result<CharacterOfG> {
    Ok(nu.power(depth(sig, kappa0)?))
}

/// Image of `p^{d |kappa_0| / 2}` in `F_p`, with the exponent.
pub fn p_isogeny_scalar(
    sig: &SignatureData,
    d: u32,
    kappa0: &AutWeight,
    p: u64,
) -> Result<(Fe, i64)> {
    if d == 0 {
        return Err(Error::domain("d_positive", "d must be >= 1"));
    }
    let f = FiniteField::new(p, 1)?;
    let exponent = d as i64 * depth(sig, kappa0)?;
    Ok((f.from_u64(p).pow(exponent as u128), exponent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(v: &[i64]) -> Weight {
        Weight::from(v)
    }

    fn gl2_point(a: u64, b: u64, p: u64) -> (RootDatum, TorusPoint) {
        let gl2 = RootDatum::gl(2).unwrap();
        let f = FiniteField::new(p, 1).unwrap();
        let s = TorusPoint::new(&gl2, vec![f.from_u64(a), f.from_u64(b)]).unwrap();
        (gl2, s)
    }

    #[test]
    fn char_value_examples() {
        let (gl2, s) = gl2_point(3, 5, 7);
        assert_eq!(char_value(&gl2, &s, &w(&[1, 0])).unwrap().as_prime_field(), Some(1));
        assert_eq!(char_value(&gl2, &s, &w(&[1, 1])).unwrap().as_prime_field(), Some(1));
        assert_eq!(char_value(&gl2, &s, &w(&[0, 0])).unwrap().as_prime_field(), Some(1));
        assert!(TorusPoint::new(&gl2, vec![s.field().zero(), s.field().one()]).is_err());
    }

    #[test]
    fn twist_examples() {
        let (gl2, s) = gl2_point(3, 5, 7);
        let det = gl2.character("det").unwrap();
        let f = s.field().clone();
        let t = twist_point(&s, &det, &f.from_u64(2)).unwrap();
        assert_eq!(t.coords, vec![f.from_u64(6), f.from_u64(3)]);
        assert_eq!(char_value(&gl2, &t, &w(&[1, 0])).unwrap(), f.from_u64(2));
        assert_eq!(twist_point(&s, &det, &f.one()).unwrap(), s);
        assert!(twist_point(&s, &det, &f.zero()).is_err());
    }

    #[test]
    fn frobenius_scalar_examples() {
        let gl2 = RootDatum::gl(2).unwrap();
        let f5 = FiniteField::new(5, 1).unwrap();
        let det = gl2.character("det").unwrap();
        assert_eq!(frobenius_scalar(&gl2, &det, &w(&[1, 0]), 2, &f5).unwrap(), f5.from_u64(2));
        assert_eq!(frobenius_scalar(&gl2, &det, &w(&[0, 0]), 2, &f5).unwrap(), f5.one());
        assert!(frobenius_scalar(&gl2, &det, &w(&[1, 0]), 10, &f5).is_err());
        let gsp4 = RootDatum::gsp(4).unwrap();
        let nu = gsp4.character("nu").unwrap();
        let f7 = FiniteField::new(7, 1).unwrap();
        let lambda = w(&[1, 1, 1]);
        assert_eq!(gsp4.pairing(&nu.coords, &lambda).unwrap(), 1);
        assert_eq!(frobenius_scalar(&gsp4, &nu, &lambda, 3, &f7).unwrap(), f7.from_u64(3));
    }

    #[test]
    fn eigensystem_examples() {
        let (gl2, s) = gl2_point(3, 5, 7);
        let f = s.field().clone();
        let sqrt = f.from_u64(3);
        let mut m = SatakeMatrices::new(&gl2);
        let psi = eigensystem_from_point(&mut m, &s, 2, &sqrt, &[w(&[2, 0]), w(&[1, 0]), w(&[0, 0])]).unwrap();
        let (a, b) = (f.from_u64(3), f.from_u64(5));
        assert_eq!(psi.values[&w(&[1, 0])], &sqrt * &(&a + &b));
        assert_eq!(psi.values[&w(&[0, 0])], f.one());
        let q = f.from_u64(2);
        let expected = &(&q * &(&(&(&a * &a) + &(&a * &b)) + &(&b * &b))) - &(&a * &b);
        assert_eq!(psi.values[&w(&[2, 0])], expected);
    }

    #[test]
    fn recovery() {
        let (gl2, s) = gl2_point(3, 5, 7);
        let f = s.field().clone();
        let mut m = SatakeMatrices::new(&gl2);
        let psi = eigensystem_from_point(&mut m, &s, 2, &f.from_u64(3), &[w(&[1, 0]), w(&[1, 1])]).unwrap();
        let orbit = point_from_eigensystem(&mut m, &psi).unwrap();
        assert_eq!(orbit, point_orbit(&gl2, &s).unwrap());
        let roots: Vec<u64> = orbit[0].coords.iter().map(|c| c.as_prime_field().unwrap()).collect();
        assert_eq!(roots, vec![3, 5]);

        // X^2 - X + 3 has discriminant -11 = 3, a non-square mod 7.
        let mut bad = psi.clone();
        let sqrt = f.from_u64(3);
        bad.values.insert(w(&[1, 0]), sqrt.clone());
        bad.values.insert(w(&[1, 1]), f.from_u64(3));
        match point_from_eigensystem(&mut m, &bad) {
            Err(Error::ExtendField { needed, .. }) => assert_eq!(needed, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn twist_theorem_gl2() {
        let (gl2, s) = gl2_point(3, 5, 7);
        let f = s.field().clone();
        let det = gl2.character("det").unwrap();
        let sqrt = f.from_u64(3);
        let cutoff = [w(&[2, 0]), w(&[1, 0])];
        let mut m = SatakeMatrices::new(&gl2);
        let psi1 = eigensystem_from_point(&mut m, &s, 2, &sqrt, &cutoff).unwrap();
        let s2 = twist_point(&s, &det, &f.from_u64(2)).unwrap();
        let psi2 = eigensystem_from_point(&mut m, &s2, 2, &sqrt, &cutoff).unwrap();
        let report = check_twist_theorem(&mut m, &psi1, &psi2, &det, None).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.orbit_comparison, Some(true));
        assert_eq!(
            report.twisted_orbit,
            vec![vec![FeDoc::Prime(3), FeDoc::Prime(6)], vec![FeDoc::Prime(6), FeDoc::Prime(3)]]
        );

        let bent = psi2.perturbed(&w(&[2, 0]), &f.one());
        let report = check_twist_theorem(&mut m, &psi1, &bent, &det, None).unwrap();
        assert!(!report.eigensystem_level && !report.parameter_level);
        assert_eq!(report.eigensystem_failures, vec![vec![2, 0]]);
    }

    #[test]
    fn twist_theorem_gsp4_with_points() {
        let gsp4 = RootDatum::gsp(4).unwrap();
        let nu = gsp4.character("nu").unwrap();
        let f = FiniteField::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s1 = TorusPoint::random(&gsp4, &f, &mut rng);
        let sqrt = f.from_u64(2).sqrt().unwrap();
        let cutoff = [w(&[2, 2, 1]), w(&[1, 1, 1])];
        let mut m = SatakeMatrices::new(&gsp4);
        let psi1 = eigensystem_from_point(&mut m, &s1, 2, &sqrt, &cutoff).unwrap();
        let s2 = twist_point(&s1, &nu, &f.from_u64(2)).unwrap();
        let psi2 = eigensystem_from_point(&mut m, &s2, 2, &sqrt, &cutoff).unwrap();
        let known = KnownPoints {
            s1: s1.clone(),
            s2: Some(s2),
        };
        let report = check_twist_theorem(&mut m, &psi1, &psi2, &nu, Some(&known)).unwrap();
        assert!(report.all_pass());
        assert!(check_twist_theorem(&mut m, &psi1, &psi2, &nu, None).is_err());
    }

    #[test]
    fn isogeny_and_theta_characters() {
        let g1 = SignatureData::siegel(1).unwrap();
        let gl2 = RootDatum::gl(2).unwrap();
        let det = gl2.character("det").unwrap();
        let eta = theta_twist_character(&g1, &AutWeight::single(&[2]), &det).unwrap();
        assert_eq!(eta.coords, det.coords);
        assert!(theta_twist_character(&g1, &AutWeight::single(&[3]), &det).is_err());
        let g2 = SignatureData::siegel(2).unwrap();
        let gsp4 = RootDatum::gsp(4).unwrap();
        let nu = gsp4.character("nu").unwrap();
        let eta = theta_twist_character(&g2, &AutWeight::single(&[2, 2]), &nu).unwrap();
        assert_eq!(eta.coords, nu.power(2).coords);

        let (z, e) = p_isogeny_scalar(&g1, 1, &AutWeight::single(&[2]), 5).unwrap();
        assert!(z.is_zero());
        assert_eq!(e, 1);
        let (z, e) = p_isogeny_scalar(&g2, 2, &AutWeight::single(&[2, 2]), 7).unwrap();
        assert!(z.is_zero());
        assert_eq!(e, 4);
        assert!(p_isogeny_scalar(&g1, 0, &AutWeight::single(&[2]), 5).is_err());
    }

    #[test]
    fn json_round_trip() {
        let (gl2, s) = gl2_point(3, 5, 7);
        let doc = s.to_doc();
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(text, r#"{"datum":"gl2","p":7,"k":1,"coords":[3,5]}"#);
        let back: TorusPointDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(TorusPoint::from_doc(&gl2, &back).unwrap(), s);
        let mut m = SatakeMatrices::new(&gl2);
        let psi = eigensystem_from_point(&mut m, &s, 2, &s.field().from_u64(3), &[w(&[1, 0])]).unwrap();
        let text = serde_json::to_string(&psi.to_doc(&gl2)).unwrap();
        let back: EigenSystemDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(EigenSystem::from_doc(&gl2, &back).unwrap(), psi);
    }
}

//! Characters of irreducible dual-group representations.
//!
//! Weight multiplicities come from Freudenthal's recursion with an integral
//! W-invariant form, so no cancellation ever happens. Products in the
//! representation ring are computed in the orbit-sum basis `m_mu` and
//! converted back to irreducible characters by peeling off the largest
//! remaining dominant weight.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::root_data::{dot, Cocharacter, RootDatum, Weight};

/// Multiplicities `dim V_lambda(mu)` for dominant `mu <= lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMultiplicityTable {
    pub highest: Weight,
    pub mults: BTreeMap<Weight, u64>,
}

impl WeightMultiplicityTable {
    pub fn mult(&self, mu: &Weight) -> u64 {
        self.mults.get(mu).copied().unwrap_or(0)
    }

    /// The full character: every weight (not only dominant ones) with its
    /// multiplicity.
    pub fn all_weights(&self, datum: &RootDatum) -> BTreeMap<Weight, u64> {
        let mut out = BTreeMap::new();
        for (mu, &m) in &self.mults {
            for nu in datum.weyl_orbit(mu) {
                out.insert(nu, m);
            }
        }
        out
    }

    /// `sum_mu mult(mu) * |W mu|`.
    pub fn orbit_dimension(&self, datum: &RootDatum) -> u64 {
        self.mults
            .iter()
            .map(|(mu, &m)| m * datum.weyl_orbit(mu).len() as u64)
            .sum()
    }
}

type TableCache = RwLock<HashMap<(String, Weight), Arc<WeightMultiplicityTable>>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Weight multiplicities of the irreducible representation of highest weight
/// `lambda`, memoized per `(datum, lambda)`.
pub fn weight_multiplicities(
    datum: &RootDatum,
    lambda: &Weight,
) -> Result<Arc<WeightMultiplicityTable>> {
    let key = (datum.canonical_key().to_string(), lambda.clone());
    if let Some(t) = table_cache().read().expect("cache lock").get(&key) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(freudenthal(datum, lambda)?);
    let mut guard = table_cache().write().expect("cache lock");
    Ok(Arc::clone(guard.entry(key).or_insert(table)))
}

fn form_value(b: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut acc = 0;
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        acc += xi * dot(&b[i], y);
    }
    acc
}

fn freudenthal(datum: &RootDatum, lambda: &Weight) -> Result<WeightMultiplicityTable> {
    let below = datum.dominant_weights_below(lambda)?;
    let form = datum.invariant_form()?;
    let two_rho = datum.two_rho_check();
    let doubled = |x: &Weight| -> Vec<i64> {
        x.coords
            .iter()
            .zip(two_rho)
            .map(|(a, r)| 2 * a + r)
            .collect()
    };
    let top = doubled(lambda);
    let top_norm = form_value(form, &top, &top);

    let mut mults: BTreeMap<Weight, u64> = BTreeMap::new();
    mults.insert(lambda.clone(), 1);
    for mu in below.iter().skip(1) {
        // 4 * sum_{alpha>0} sum_{k>=1} m(mu + k alpha) (mu + k alpha, alpha)
        let mut num: i64 = 0;
        for alpha in datum.positive_coroots() {
            let two_alpha: Vec<i64> = alpha.iter().map(|a| 2 * a).collect();
            let mut k = 1;
            loop {
                let nu = Cocharacter::new(
                    mu.coords
                        .iter()
                        .zip(alpha)
                        .map(|(m, a)| m + k * a)
                        .collect(),
                );
                let rep = datum.dominant_representative(&nu);
                if !datum.leq_unchecked(&rep, lambda) {
                    break;
                }
                let m = *mults
                    .get(&rep)
                    .expect("higher weights are processed first") as i64;
                let two_nu: Vec<i64> = nu.coords.iter().map(|c| 2 * c).collect();
                num += m * form_value(form, &two_nu, &two_alpha);
                k += 1;
            }
        }
        let cur = doubled(mu);
        let den = top_norm - form_value(form, &cur, &cur);
        assert!(den > 0, "Freudenthal denominator must be positive");
        assert!(
            (2 * num) % den == 0,
            "Freudenthal quotient must be integral"
        );
        let m = 2 * num / den;
        assert!(m > 0, "dominant weights below lambda occur");
        mults.insert(mu.clone(), m as u64);
    }
    Ok(WeightMultiplicityTable {
        highest: lambda.clone(),
        mults,
    })
}

/// Weyl dimension formula, in exact rationals.
pub fn dimension(datum: &RootDatum, lambda: &Weight) -> Result<u64> {
    if !datum.is_dominant(lambda)? {
        return Err(Error::domain(
            "dominant",
            format!("{lambda} is not dominant for {}", datum.name()),
        ));
    }
    let two_rho = datum.two_rho_check();
    let shifted: Vec<i64> = lambda
        .coords
        .iter()
        .zip(two_rho)
        .map(|(a, r)| 2 * a + r)
        .collect();
    let mut acc = Ratio::<i128>::from_integer(1);
    for alpha in datum.positive_roots() {
        let n = dot(alpha, &shifted) as i128;
        let d = dot(alpha, two_rho) as i128;
        acc *= Ratio::new(n, d);
    }
    assert!(acc.is_integer(), "Weyl dimension must be an integer");
    Ok(acc.to_integer() as u64)
}

/// An element `sum c_lambda chi_lambda` of the representation ring.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VirtualCharacter {
    pub terms: BTreeMap<Weight, i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterTermDoc {
    pub weight: Vec<i64>,
    pub coeff: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VirtualCharacterDoc {
    pub terms: Vec<CharacterTermDoc>,
}

impl VirtualCharacter {
    pub fn zero() -> Self {
        VirtualCharacter::default()
    }

    pub fn irreducible(lambda: Weight) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(lambda, 1);
        VirtualCharacter { terms }
    }

    pub fn add_term(&mut self, lambda: Weight, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(lambda.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&lambda);
        }
    }

    pub fn coeff(&self, lambda: &Weight) -> i64 {
        self.terms.get(lambda).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded order, largest weights first.
    pub fn to_doc(&self, datum: &RootDatum) -> VirtualCharacterDoc {
        let mut keys: Vec<Weight> = self.terms.keys().cloned().collect();
        datum.sort_graded(&mut keys);
        VirtualCharacterDoc {
            terms: keys
                .into_iter()
                .map(|k| CharacterTermDoc {
                    coeff: self.terms[&k],
                    weight: k.coords,
                })
                .collect(),
        }
    }

    pub fn from_doc(datum: &RootDatum, doc: &VirtualCharacterDoc) -> Result<Self> {
        let mut out = VirtualCharacter::zero();
        for t in &doc.terms {
            let w = Weight::new(t.weight.clone());
            if !datum.is_dominant(&w)? {
                return Err(Error::domain("dominant", format!("{w} is not dominant")));
            }
            out.add_term(w, t.coeff);
        }
        Ok(out)
    }

    /// Value at the identity of the dual torus, i.e. the virtual dimension.
    pub fn virtual_dimension(&self, datum: &RootDatum) -> Result<i64> {
        let mut acc = 0i64;
        for (l, c) in &self.terms {
            acc += c * dimension(datum, l)? as i64;
        }
        Ok(acc)
    }
}

/// W-invariant element in the orbit-sum basis: dominant `mu` -> coefficient
/// of `m_mu = sum_{nu in W mu} e^nu`.
pub type OrbitSums = BTreeMap<Weight, i64>;

fn add_into(map: &mut OrbitSums, k: Weight, c: i64) {
    if c == 0 {
        return;
    }
    let e = map.entry(k.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        map.remove(&k);
    }
}

/// `chi -> orbit sums`.
pub fn to_orbit_sums(datum: &RootDatum, x: &VirtualCharacter) -> Result<OrbitSums> {
    let mut out = OrbitSums::new();
    for (lambda, &c) in &x.terms {
        let table = weight_multiplicities(datum, lambda)?;
        for (mu, &m) in &table.mults {
            add_into(&mut out, mu.clone(), c * m as i64);
        }
    }
    Ok(out)
}

/// Orbit sums -> irreducible characters, peeling off the largest dominant
/// weight each round.
pub fn from_orbit_sums(datum: &RootDatum, x: &OrbitSums) -> Result<VirtualCharacter> {
    let mut rest = x.clone();
    let mut out = VirtualCharacter::zero();
    while let Some(top) = rest
        .keys()
        .max_by(|a, b| {
            datum
                .rho_pairing_doubled(a)
                .cmp(&datum.rho_pairing_doubled(b))
                .then_with(|| a.cmp(b))
        })
        .cloned()
    {
        let c = rest[&top];
        out.add_term(top.clone(), c);
        let table = weight_multiplicities(datum, &top)?;
        for (mu, &m) in &table.mults {
            add_into(&mut rest, mu.clone(), -c * m as i64);
        }
    }
    Ok(out)
}

/// Product of two orbit-sum elements.
pub fn multiply_orbit_sums(datum: &RootDatum, a: &OrbitSums, b: &OrbitSums) -> OrbitSums {
    let mut orbits: HashMap<&Weight, Vec<Weight>> = HashMap::new();
    for k in a.keys().chain(b.keys()) {
        orbits
            .entry(k)
            .or_insert_with(|| datum.weyl_orbit(k).into_iter().collect());
    }
    let mut out = OrbitSums::new();
    for (ka, &ca) in a {
        for (kb, &cb) in b {
            let oa = &orbits[ka];
            // Dominant nu = x + y with x in W a, y in W b: fix y ranging over
            // the orbit of b and x over the orbit of a.
            for x in oa {
                for y in &orbits[kb] {
                    let nu = x.add(y);
                    if datum.is_dominant(&nu).unwrap_or(false) {
                        add_into(&mut out, nu, ca * cb);
                    }
                }
            }
        }
    }
    out
}

/// Product in the representation ring.
pub fn multiply(
    datum: &RootDatum,
    a: &VirtualCharacter,
    b: &VirtualCharacter,
) -> Result<VirtualCharacter> {
    let oa = to_orbit_sums(datum, a)?;
    let ob = to_orbit_sums(datum, b)?;
    from_orbit_sums(datum, &multiply_orbit_sums(datum, &oa, &ob))
}

fn require_positive_power(e: u32) -> Result<()> {
    if e == 0 {
        return Err(Error::domain("power_positive", "exponent must be >= 1"));
    }
    Ok(())
}

/// `chi_lambda^{tensor e}`.
pub fn tensor_power(datum: &RootDatum, lambda: &Weight, e: u32) -> Result<VirtualCharacter> {
    let x = VirtualCharacter::irreducible(lambda.clone());
    tensor_power_of(datum, &x, e)
}

/// `x^{tensor e}` for an arbitrary virtual character.
pub fn tensor_power_of(datum: &RootDatum, x: &VirtualCharacter, e: u32) -> Result<VirtualCharacter> {
    require_positive_power(e)?;
    let base = to_orbit_sums(datum, x)?;
    let mut acc = base.clone();
    for _ in 1..e {
        acc = multiply_orbit_sums(datum, &acc, &base);
    }
    from_orbit_sums(datum, &acc)
}

/// Adams operation `psi^i`: rescales every weight by `i`.
pub fn adams(x: &OrbitSums, i: i64) -> OrbitSums {
    x.iter().map(|(k, &c)| (k.scale(i), c)).collect()
}

/// `Sym^e(V_lambda)`.
pub fn sym_power(datum: &RootDatum, lambda: &Weight, e: u32) -> Result<VirtualCharacter> {
    let x = VirtualCharacter::irreducible(lambda.clone());
    sym_power_of(datum, &x, e)
}

/// `Sym^e` of a (genuine) representation given by its character, through
/// `e * Sym^e = sum_{i=1..e} psi^i * Sym^{e-i}`.
pub fn sym_power_of(datum: &RootDatum, x: &VirtualCharacter, e: u32) -> Result<VirtualCharacter> {
    require_positive_power(e)?;
    let base = to_orbit_sums(datum, x)?;
    let mut sym: Vec<OrbitSums> = Vec::with_capacity(e as usize + 1);
    let mut one = OrbitSums::new();
    one.insert(Weight::zero(datum.rank()), 1);
    sym.push(one);
    let powers: Vec<OrbitSums> = (1..=e as i64).map(|i| adams(&base, i)).collect();
    for n in 1..=e as usize {
        let mut acc = OrbitSums::new();
        for i in 1..=n {
            let term = multiply_orbit_sums(datum, &powers[i - 1], &sym[n - i]);
            for (k, c) in term {
                add_into(&mut acc, k, c);
            }
        }
        for c in acc.values_mut() {
            assert!(*c % n as i64 == 0, "Newton recursion must divide exactly");
            *c /= n as i64;
        }
        sym.push(acc);
    }
    from_orbit_sums(datum, &sym[e as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight::from(v)
    }

    fn chi(pairs: &[(&[i64], i64)]) -> VirtualCharacter {
        let mut out = VirtualCharacter::zero();
        for (k, c) in pairs {
            out.add_term(w(k), *c);
        }
        out
    }

    #[test]
    fn multiplicity_examples() {
        let gl2 = RootDatum::gl(2).unwrap();
        let t = weight_multiplicities(&gl2, &w(&[1, 0])).unwrap();
        assert_eq!(t.mults.len(), 1);
        assert_eq!(t.orbit_dimension(&gl2), 2);

        let gl3 = RootDatum::gl(3).unwrap();
        let t = weight_multiplicities(&gl3, &w(&[1, 0, -1])).unwrap();
        assert_eq!(t.mult(&w(&[1, 0, -1])), 1);
        assert_eq!(t.mult(&w(&[0, 0, 0])), 2);

        let gsp4 = RootDatum::gsp(4).unwrap();
        let t = weight_multiplicities(&gsp4, &w(&[1, 1, 1])).unwrap();
        assert_eq!(t.mults.len(), 1);
        assert_eq!(t.all_weights(&gsp4).len(), 4);
        assert!(t.all_weights(&gsp4).values().all(|&m| m == 1));

        assert!(weight_multiplicities(&gl2, &w(&[0, 1])).is_err());
    }

    #[test]
    fn dimension_examples() {
        let gl2 = RootDatum::gl(2).unwrap();
        for k in 0..6 {
            assert_eq!(dimension(&gl2, &w(&[k, 0])).unwrap(), k as u64 + 1);
        }
        let gl3 = RootDatum::gl(3).unwrap();
        assert_eq!(dimension(&gl3, &w(&[1, 0, -1])).unwrap(), 8);
        assert_eq!(dimension(&gl3, &w(&[0, 0, 0])).unwrap(), 1);
        let gsp4 = RootDatum::gsp(4).unwrap();
        assert_eq!(dimension(&gsp4, &w(&[1, 1, 1])).unwrap(), 4);
        assert_eq!(dimension(&gsp4, &w(&[0, 1, 0])).unwrap(), 5);
        assert!(dimension(&gl2, &w(&[0, 1])).is_err());
    }

    #[test]
    fn adjoint_by_orbit_product() {
        // chi_{(1,0,0)} * chi_{(0,0,-1)} - chi_0 = chi_{(1,0,-1)}
        let gl3 = RootDatum::gl(3).unwrap();
        let p = multiply(
            &gl3,
            &chi(&[(&[1, 0, 0], 1)]),
            &chi(&[(&[0, 0, -1], 1)]),
        )
        .unwrap();
        assert_eq!(p, chi(&[(&[1, 0, -1], 1), (&[0, 0, 0], 1)]));
    }

    #[test]
    fn clebsch_gordan() {
        let gl2 = RootDatum::gl(2).unwrap();
        let v = chi(&[(&[1, 0], 1)]);
        assert_eq!(
            multiply(&gl2, &v, &v).unwrap(),
            chi(&[(&[2, 0], 1), (&[1, 1], 1)])
        );
        let s2 = chi(&[(&[2, 0], 1)]);
        assert_eq!(
            multiply(&gl2, &s2, &s2).unwrap(),
            chi(&[(&[4, 0], 1), (&[3, 1], 1), (&[2, 2], 1)])
        );
        let one = chi(&[(&[0, 0], 1)]);
        assert_eq!(multiply(&gl2, &s2, &one).unwrap(), s2);
    }

    #[test]
    fn powers() {
        let gl2 = RootDatum::gl(2).unwrap();
        let t = tensor_power(&gl2, &w(&[2, 0]), 2).unwrap();
        assert_eq!(t.coeff(&w(&[3, 1])), 1);
        let s = sym_power(&gl2, &w(&[2, 0]), 2).unwrap();
        assert_eq!(s, chi(&[(&[4, 0], 1), (&[2, 2], 1)]));
        assert_eq!(s.virtual_dimension(&gl2).unwrap(), 6);
        assert_eq!(sym_power(&gl2, &w(&[2, 0]), 1).unwrap(), chi(&[(&[2, 0], 1)]));
        assert!(sym_power(&gl2, &w(&[2, 0]), 0).is_err());
        // Sym^3 of the standard rep of gl3 is irreducible.
        let gl3 = RootDatum::gl(3).unwrap();
        assert_eq!(
            sym_power(&gl3, &w(&[1, 0, 0]), 3).unwrap(),
            chi(&[(&[3, 0, 0], 1)])
        );
    }

    #[test]
    fn json_doc() {
        let gl2 = RootDatum::gl(2).unwrap();
        let x = chi(&[(&[2, 0], 1), (&[1, 1], -3)]);
        let doc = x.to_doc(&gl2);
        assert_eq!(doc.terms[0].weight, vec![2, 0]);
        let s = serde_json::to_string(&doc).unwrap();
        assert_eq!(s, r#"{"terms":[{"weight":[2,0],"coeff":1},{"weight":[1,1],"coeff":-3}]}"#);
        let back: VirtualCharacterDoc = serde_json::from_str(&s).unwrap();
        assert_eq!(VirtualCharacter::from_doc(&gl2, &back).unwrap(), x);
    }
}

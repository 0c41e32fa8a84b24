//! The acceptance suite: ten end-to-end checks, each run against an
//! independent oracle or an exact identity.
//!
//! [`run_all`] is shared by the `acceptance` integration test and the
//! `selftest` subcommand of the command-line tool.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automorphic_weights::{
    dominant_tuples, is_admissible_characterized, reconcile_case_c, AutWeight, Case, Place,
    SignatureData,
};
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::galois_twist::{
    char_value, check_twist_theorem, eigensystem_from_point, frobenius_scalar, p_isogeny_scalar,
    twist_point, KnownPoints, TorusPoint,
};
use crate::laurent::LaurentV;
use crate::modp_forms::{
    basis, commutation_check, delta_mod_p, eigen_twist_check, filtration, hasse, theta,
};
use crate::oracle;
use crate::rep_ring::{dimension, weight_multiplicities};
use crate::root_data::{RootDatum, Weight};
use crate::satake::{HeckeElement, LaurentCombination, SatakeMatrices};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Number of criteria.
pub const CRITERIA: u32 = 10;

const TENSOR_FIXTURE: &str = include_str!("../tests/fixtures/tensor_discrepancies.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    /// Number of individual comparisons made.
    pub checked: usize,
    /// The first few failures, or the error that stopped the run.
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
    pub budget_ms: Option<u128>,
}

impl CriterionReport {
    /// One line of the form `criterion 3 PASS weight multiplicities (...)`.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let budget = match self.budget_ms {
            Some(b) => format!("{} ms of {} ms", self.elapsed_ms, b),
            None => format!("{} ms", self.elapsed_ms),
        };
        let mut s = format!(
            "criterion {:>2} {verdict} {}: {} checks, {budget}",
            self.id, self.name, self.checked
        );
        if let Some(first) = self.failures.first() {
            s.push_str(&format!("; first failure: {first}"));
        }
        s
    }
}

struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

fn name(id: u32) -> &'static str {
    match id {
        1 => "satake round trip",
        2 => "gl2 convolution oracle",
        3 => "weight multiplicities",
        4 => "twist theorem",
        5 => "central pairing lemma",
        6 => "theta and Hecke commute",
        7 => "weight bookkeeping",
        8 => "eigenvalue twist",
        9 => "admissibility reconciliation",
        10 => "p-isogeny scalar",
        _ => "unknown",
    }
}

fn budget(id: u32) -> Option<Duration> {
    let secs = match id {
        1 => 60,
        2 => 10,
        3 => 30,
        4 => 60,
        6 => 60,
        9 => 120,
        10 => 1,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

/// Runs one criterion.
pub fn run(id: u32, seed: u64) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let outcome = match id {
        1 => satake_round_trip(&mut t),
        2 => gl2_convolution(&mut t),
        3 => multiplicities(&mut t),
        4 => twist_theorem(&mut t, seed),
        5 => central_pairing(&mut t),
        6 => commutation(&mut t),
        7 => bookkeeping(&mut t),
        8 => eigenvalue_twist(&mut t),
        9 => reconciliation(&mut t),
        10 => isogeny_scalar(&mut t),
        _ => Err(Error::domain("criterion_known", format!("no criterion {id}"))),
    };
    let elapsed = start.elapsed();
    if let Err(e) = outcome {
        t.failures.insert(0, format!("error: {e}"));
    }
    let within = budget(id).map_or(true, |b| elapsed <= b);
    if !within {
        t.failures.push(format!("over time budget: {elapsed:?}"));
    }
    CriterionReport {
        id,
        name: name(id).to_string(),
        passed: t.failures.is_empty(),
        checked: t.checked,
        failures: t.failures,
        elapsed_ms: elapsed.as_millis(),
        budget_ms: budget(id).map(|b| b.as_millis()),
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    (1..=CRITERIA).map(|id| run(id, seed)).collect()
}

fn data() -> Result<Vec<RootDatum>> {
    Ok(vec![RootDatum::gl(2)?, RootDatum::gl(3)?, RootDatum::gsp(4)?])
}

fn box_vectors(rank: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Dominant weights with entries in `[-2, 3]` and `sum |entries| <= 6`.
pub fn round_trip_weights(datum: &RootDatum) -> Result<Vec<Weight>> {
    let mut out = Vec::new();
    for v in box_vectors(datum.rank(), -2, 3) {
        if v.iter().map(|x| x.abs()).sum::<i64>() > 6 {
            continue;
        }
        let w = Weight::new(v);
        if datum.is_dominant(&w)? {
            out.push(w);
        }
    }
    datum.sort_graded(&mut out);
    Ok(out)
}

fn satake_round_trip(t: &mut Tally) -> Result<()> {
    let one = LaurentV::one();
    for datum in data()? {
        let mut m = SatakeMatrices::new(&datum);
        for l in round_trip_weights(&datum)? {
            let c = HeckeElement::basis(&datum, l.clone());
            let image = m.satake(&c)?;
            let back = m.satake_inverse(&image)?;
            t.check(back.combination == c.combination, || {
                format!("{}: S^-1 S c_{l} != c_{l}", datum.name())
            });
            let chi = LaurentCombination::basis(l.clone());
            let pre = m.satake_inverse(&chi)?;
            let again = m.satake(&pre)?;
            t.check(again == chi, || format!("{}: S S^-1 chi_{l} != chi_{l}", datum.name()));
            t.check(m.b(&l, &l)? == one, || format!("{}: b_{l}({l}) != 1", datum.name()));
            t.check(m.d(&l, &l)? == one, || format!("{}: d_{l}({l}) != 1", datum.name()));
        }
    }
    Ok(())
}

fn gl2_convolution(t: &mut Tally) -> Result<()> {
    let gl2 = RootDatum::gl(2)?;
    let mut m = SatakeMatrices::new(&gl2);
    let weights = [(1, 0), (1, 1), (2, 0)];
    for q in [2i64, 3] {
        for &a in &weights {
            for &b in &weights {
                let wa = Weight::from(vec![a.0, a.1]);
                let wb = Weight::from(vec![b.0, b.1]);
                let h = m.hecke_multiply(
                    &HeckeElement::basis(&gl2, wa),
                    &HeckeElement::basis(&gl2, wb),
                )?;
                let mut ours = BTreeMap::new();
                for (nu, c) in &h.combination.terms {
                    let v = c.eval_q(q).ok_or_else(|| {
                        Error::Inconsistent(format!("coefficient {c} is not in Z[q]"))
                    })?;
                    if v != 0 {
                        ours.insert((nu.coords[0], nu.coords[1]), v);
                    }
                }
                let theirs = oracle::gl2_convolution(q as u64, a, b);
                t.check(ours == theirs, || {
                    format!("q={q}: c{a:?} * c{b:?} gives {ours:?}, cosets give {theirs:?}")
                });
            }
        }
        let square = m.hecke_multiply(
            &HeckeElement::basis(&gl2, Weight::from(vec![1, 0])),
            &HeckeElement::basis(&gl2, Weight::from(vec![1, 0])),
        )?;
        let mut expected = LaurentCombination::basis(Weight::from(vec![2, 0]));
        expected.add_term(
            Weight::from(vec![1, 1]),
            &LaurentV::from_terms([(2, 1), (0, 1)]),
        );
        t.check(square.combination == expected, || {
            format!("c(1,0)^2 = {:?}", square.combination)
        });
    }
    Ok(())
}

fn multiplicities(t: &mut Tally) -> Result<()> {
    for datum in data()? {
        for v in box_vectors(datum.rank(), -2, 4) {
            let l = Weight::new(v);
            if !datum.is_dominant(&l)? || datum.dominant_weights_below(&l)?.len() > 20 {
                continue;
            }
            let table = weight_multiplicities(&datum, &l)?;
            let ours: BTreeMap<Weight, i64> = table
                .all_weights(&datum)
                .into_iter()
                .map(|(w, m)| (w, m as i64))
                .collect();
            let theirs = oracle::weyl_character(&datum, &l)?;
            t.check(ours == theirs, || {
                format!("{}: multiplicities of {l} disagree with the Weyl character", datum.name())
            });
            let dim = dimension(&datum, &l)?;
            t.check(table.orbit_dimension(&datum) == dim, || {
                format!("{}: sum of mult * orbit for {l} is not {dim}", datum.name())
            });
        }
    }
    Ok(())
}

struct TwistSetup {
    datum: RootDatum,
    eta: crate::root_data::CharacterOfG,
    cutoff: Vec<Weight>,
    matrices: SatakeMatrices,
    recoverable: bool,
}

fn twist_setups() -> Result<Vec<TwistSetup>> {
    let w = |v: &[i64]| Weight::from(v);
    let specs: Vec<(RootDatum, &str, Vec<Weight>, bool)> = vec![
        (
            RootDatum::gl(2)?,
            "det",
            vec![w(&[2, 0]), w(&[1, 0]), w(&[1, 1]), w(&[2, 1])],
            true,
        ),
        (
            RootDatum::gl(3)?,
            "det",
            vec![w(&[1, 0, 0]), w(&[1, 1, 0]), w(&[1, 1, 1]), w(&[1, 0, -1]), w(&[2, 1, 0])],
            true,
        ),
        (
            RootDatum::gsp(4)?,
            "nu",
            vec![w(&[1, 1, 1]), w(&[2, 2, 1]), w(&[0, 1, 0])],
            false,
        ),
    ];
    specs
        .into_iter()
        .map(|(datum, eta, cutoff, recoverable)| {
            let eta = datum.character(eta)?;
            let matrices = SatakeMatrices::build(&datum, &cutoff)?;
            Ok(TwistSetup {
                datum,
                eta,
                cutoff,
                matrices,
                recoverable,
            })
        })
        .collect()
}

fn twist_theorem(t: &mut Tally, seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut setups = twist_setups()?;
    let mut perturbations = 0;
    let mut instance = 0;
    while instance < 100 || perturbations < 100 {
        let setup = &mut setups[instance % 3];
        let p = [5u64, 7, 11][rng.gen_range(0..3)];
        let k = rng.gen_range(1..=3usize);
        let field = FiniteField::new(p, k)?;
        let (q, sqrt) = loop {
            let q: i64 = rng.gen_range(2..=40);
            if q % p as i64 == 0 {
                continue;
            }
            if let Some(r) = field.from_i64(q).sqrt() {
                break (q, r);
            }
        };
        let q_bar = field.from_i64(q);
        let datum = setup.datum.clone();
        let s1 = TorusPoint::random(&datum, &field, &mut rng);
        let twisted = twist_point(&s1, &setup.eta, &q_bar)?;
        let is_twist = rng.gen_bool(0.5);
        let s2 = if is_twist {
            twisted.clone()
        } else {
            TorusPoint::random(&datum, &field, &mut rng)
        };
        let m = &mut setup.matrices;
        let psi1 = eigensystem_from_point(m, &s1, q, &sqrt, &setup.cutoff)?;
        let psi2 = eigensystem_from_point(m, &s2, q, &sqrt, &setup.cutoff)?;
        let known = KnownPoints {
            s1: s1.clone(),
            s2: Some(s2.clone()),
        };
        let points = (!setup.recoverable).then_some(&known);
        let tag = || format!("{} p={p} k={k} q={q} instance {instance}", datum.name());

        for l in psi1.values.keys() {
            let lhs = char_value(&datum, &twisted, l)?;
            let rhs = &frobenius_scalar(&datum, &setup.eta, l, q, &field)? * &char_value(&datum, &s1, l)?;
            t.check(lhs == rhs, || format!("{}: character identity at {l}", tag()));
        }

        if instance < 100 {
            match check_twist_theorem(m, &psi1, &psi2, &setup.eta, points) {
                Ok(r) => {
                    t.check(r.equivalent && r.character_identity, || {
                        format!("{}: report {r:?}", tag())
                    });
                    if is_twist {
                        t.check(r.eigensystem_level && r.parameter_level, || {
                            format!("{}: the twisted point was rejected", tag())
                        });
                    }
                }
                Err(e) => t.check(false, || format!("{}: {e}", tag())),
            }
        }

        if is_twist && perturbations < 100 {
            let keys: Vec<&Weight> = psi2.values.keys().collect();
            let l = keys[rng.gen_range(0..keys.len())].clone();
            let delta = loop {
                let d = field.element(rng.gen_range(0..field.size()));
                if !d.is_zero() {
                    break d;
                }
            };
            let bad = psi2.perturbed(&l, &delta);
            let known = KnownPoints {
                s1: s1.clone(),
                s2: None,
            };
            let points = (!setup.recoverable).then_some(&known);
            match check_twist_theorem(m, &psi1, &bad, &setup.eta, points) {
                Ok(r) => t.check(!r.eigensystem_level && !r.parameter_level && r.equivalent, || {
                    format!("{}: perturbation at {l} was accepted", tag())
                }),
                Err(e) => t.check(false, || format!("{}: perturbation at {l}: {e}", tag())),
            }
            perturbations += 1;
        }
        instance += 1;
    }
    Ok(())
}

fn central_pairing(t: &mut Tally) -> Result<()> {
    let mut cutoffs: Vec<(RootDatum, Vec<Weight>)> = Vec::new();
    for datum in data()? {
        let ws = round_trip_weights(&datum)?;
        cutoffs.push((datum, ws));
    }
    for s in twist_setups()? {
        cutoffs.push((s.datum, s.cutoff));
    }
    for (datum, lambdas) in cutoffs {
        let etas: Vec<_> = datum.characters().collect();
        for eta in &etas {
            for c in datum.simple_coroots() {
                let x = datum.pairing(&eta.coords, &Weight::new(c.clone()))?;
                t.check(x == 0, || format!("{}: <{}, {c:?}> = {x}", datum.name(), eta.name));
            }
            for l in &lambdas {
                let target = datum.pairing(&eta.coords, l)?;
                for mu in datum.dominant_weights_below(l)? {
                    let x = datum.pairing(&eta.coords, &mu)?;
                    t.check(x == target, || {
                        format!("{}: <{}, {mu}> != <{}, {l}>", datum.name(), eta.name, eta.name)
                    });
                }
            }
        }
    }
    Ok(())
}

fn commutation(t: &mut Tally) -> Result<()> {
    let n = 100;
    for p in [5u64, 7, 11, 13] {
        for ell in [2u64, 3, 5, 7] {
            if ell == p {
                continue;
            }
            for k in (0..=24).step_by(2) {
                for (i, f) in basis(k, p, n * 7)?.iter().enumerate() {
                    let ok = commutation_check(f, ell, n)?;
                    t.check(ok, || format!("p={p} l={ell} k={k} basis form {i}"));
                }
            }
        }
    }
    Ok(())
}

fn bookkeeping(t: &mut Tally) -> Result<()> {
    for p in [5u64, 7, 11, 13] {
        let d = delta_mod_p(p, 40)?;
        let w = theta(&d)?.weight;
        t.check(w == 12 + p as i64 + 1, || format!("theta Delta mod {p} has weight {w}"));
    }
    let d5 = delta_mod_p(5, 40)?;
    let fd = filtration(&d5)?;
    t.check(fd == 12, || format!("filtration of Delta mod 5 is {fd}"));
    let ft = filtration(&theta(&d5)?)?;
    t.check(ft <= 18, || format!("filtration of theta Delta mod 5 is {ft}"));

    let mut forms = 0;
    'outer: for p in [5u64, 7, 11, 13] {
        let e = hasse(p, 60)?;
        for k in (4..=24).step_by(2) {
            for f in basis(k, p, 60)?.iter() {
                let a = filtration(f)?;
                let b = filtration(&f.mul(&e)?)?;
                t.check(a == b, || format!("p={p} k={k}: {a} vs {b} after the Hasse invariant"));
                forms += 1;
                if forms == 20 {
                    break 'outer;
                }
            }
        }
    }
    Ok(())
}

fn eigenvalue_twist(t: &mut Tally) -> Result<()> {
    let p = 5u64;
    let n = 30;
    let ells = [2u64, 3, 7];
    let f = delta_mod_p(p, n * 7)?;
    let tau = oracle::delta_product(10);
    let report = eigen_twist_check(&f, &ells, n)?;
    t.check(!report.theta_kills_f, || "theta kills Delta mod 5".into());
    for e in &report.ells {
        let a = tau[e.ell as usize].clone() % i64::try_from(p).unwrap();
        let a = (i64::try_from(a).unwrap()).rem_euclid(p as i64) as u64;
        t.check(e.a_ell == a, || format!("a_{} = {} but tau gives {a}", e.ell, e.a_ell));
        t.check(e.f_is_eigen && e.theta_is_eigen, || format!("T_{} eigenform check", e.ell));
        t.check(e.theta_eigenvalue == e.ell % p * a % p, || {
            format!("T_{} eigenvalue {} on theta Delta", e.ell, e.theta_eigenvalue)
        });
        t.check(e.twist.as_ref().is_some_and(|r| r.all_pass()), || {
            format!("l = {}: twist report {:?}", e.ell, e.twist)
        });
    }
    Ok(())
}

/// A weight on which the tensor-power constituent test disagrees with the
/// symmetric-power one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub n: usize,
    pub lambda: Vec<i64>,
    pub characterized: bool,
    pub sym: bool,
    pub tensor: bool,
}

/// Case-C sweep for `n <= 3`, entries in `[-2, 10]`, `|lambda| <= 8`.
/// Returns the rows where the characterized predicate and the sym test
/// disagree, and the tensor discrepancies.
pub fn case_c_sweep() -> Result<(Vec<Discrepancy>, Vec<Discrepancy>, usize)> {
    let mut mismatches = Vec::new();
    let mut tensor = Vec::new();
    let mut rows_seen = 0;
    for n in 1..=3 {
        for row in reconcile_case_c(n, -2, 10, 8)? {
            rows_seen += 1;
            let d = Discrepancy {
                n,
                lambda: row.lambda.flatten().coords,
                characterized: row.characterized,
                sym: row.sym,
                tensor: row.tensor,
            };
            if row.characterized != row.sym {
                mismatches.push(d.clone());
            }
            if row.tensor != row.sym {
                tensor.push(d);
            }
        }
    }
    Ok((mismatches, tensor, rows_seen))
}

fn reconciliation(t: &mut Tally) -> Result<()> {
    let (mismatches, tensor, rows) = case_c_sweep()?;
    t.checked += rows;
    for d in mismatches {
        t.check(false, || format!("characterized and sym disagree on {d:?}"));
    }
    let fixture: Vec<Discrepancy> = serde_json::from_str(TENSOR_FIXTURE)
        .map_err(|e| Error::parse("tensor_discrepancies.json", e.to_string()))?;
    t.check(fixture == tensor, || {
        format!("tensor discrepancies {tensor:?} differ from the committed list")
    });
    let at_four: Vec<&Vec<i64>> = tensor
        .iter()
        .filter(|d| d.n == 2 && d.lambda.iter().sum::<i64>() == 4)
        .map(|d| &d.lambda)
        .collect();
    t.check(at_four == [&vec![3, 1]], || format!("n=2, |lambda|=4 discrepancies: {at_four:?}"));
    Ok(())
}

fn admissible_sweep() -> Result<Vec<(SignatureData, AutWeight)>> {
    let mut out = Vec::new();
    for g in 1..=3 {
        let sig = SignatureData::siegel(g)?;
        for tuple in dominant_tuples(g, 0, 8) {
            let k = AutWeight::single(&tuple);
            if is_admissible_characterized(&sig, &k)? {
                out.push((sig.clone(), k));
            }
        }
    }
    for (a, b) in [(1usize, 1usize), (2, 1)] {
        let sig = SignatureData::new(Case::A, vec![Place::Unitary { a, a_star: b }])?;
        for x in dominant_tuples(a, 0, 6) {
            for y in dominant_tuples(b, 0, 6) {
                let k = AutWeight::new(vec![x.clone(), y]);
                if is_admissible_characterized(&sig, &k)? {
                    out.push((sig.clone(), k));
                }
            }
        }
    }
    Ok(out)
}

fn isogeny_scalar(t: &mut Tally) -> Result<()> {
    for (sig, k) in admissible_sweep()? {
        for p in [5u64, 7, 11, 13] {
            for d in 1..=5 {
                let (x, e) = p_isogeny_scalar(&sig, d, &k, p)?;
                t.check(x.is_zero() && e >= 1, || format!("d={d} p={p} kappa={k}: {x} (exponent {e})"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_weights_are_dominant_and_bounded() {
        let gsp4 = RootDatum::gsp(4).unwrap();
        let ws = round_trip_weights(&gsp4).unwrap();
        assert!(ws.contains(&Weight::from(vec![1, 1, 1])));
        assert!(!ws.contains(&Weight::from(vec![1, 1, 0])));
        assert!(ws.iter().all(|w| w.coords.iter().map(|x| x.abs()).sum::<i64>() <= 6));
    }

    #[test]
    fn unknown_criterion_fails() {
        let r = run(11, DEFAULT_SEED);
        assert!(!r.passed);
    }

    #[test]
    fn admissible_sweep_is_nonempty() {
        assert!(admissible_sweep().unwrap().len() > 20);
    }
}

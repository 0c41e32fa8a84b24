//! Automorphic weights for `H = prod_tau GL_{a_tau}`.
//!
//! A signature fixes the blocks of `H`. Case `C` has one block `GL_n` per
//! place; case `A` has a pair of blocks `GL_a x GL_{a*}` per place with
//! `a + a* = n` for one `n` shared by all places.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rep_ring::{sym_power_of, tensor_power_of, VirtualCharacter};
use crate::root_data::{RootDatum, Weight};

/// Largest `e * (number of GL coordinates)` for which constituent tests run.
pub const MAX_CONSTITUENT_SIZE: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    A,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Place {
    Unitary { a: usize, a_star: usize },
    Symplectic { n: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureData {
    pub case: Case,
    pub places: Vec<Place>,
}

/// Representation used to test constituents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerMode {
    Tensor,
    Sym,
}

/// One integer tuple per block, in block order (`tau` before `tau*` in
/// case A).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AutWeight {
    pub parts: Vec<Vec<i64>>,
}

impl fmt::Display for AutWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("({})", s.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl SignatureData {
    pub fn new(case: Case, places: Vec<Place>) -> Result<Self> {
        let sig = SignatureData { case, places };
        sig.validate()?;
        Ok(sig)
    }

    /// Siegel-type signature: one place with `GL_g`.
    pub fn siegel(g: usize) -> Result<Self> {
        SignatureData::new(Case::C, vec![Place::Symplectic { n: g }])
    }

    pub fn from_json(document: &str) -> Result<Self> {
        let sig: SignatureData =
            serde_json::from_str(document).map_err(|e| Error::parse("signature", e.to_string()))?;
        sig.validate()?;
        Ok(sig)
    }

    fn validate(&self) -> Result<()> {
        if self.places.is_empty() {
            return Err(Error::domain("places_nonempty", "no places given"));
        }
        let mut common_n = None;
        for (i, place) in self.places.iter().enumerate() {
            match (self.case, place) {
                (Case::C, Place::Symplectic { n }) => {
                    if *n == 0 {
                        return Err(Error::domain("a_positive", format!("places[{i}].n is 0")));
                    }
                }
                (Case::A, Place::Unitary { a, a_star }) => {
                    if *a == 0 || *a_star == 0 {
                        return Err(Error::domain("a_positive", format!("places[{i}] has a zero block")));
                    }
                    let n = a + a_star;
                    if *common_n.get_or_insert(n) != n {
                        return Err(Error::domain(
                            "common_n",
                            format!("places[{i}] has a + a* = {n}, expected {}", common_n.unwrap()),
                        ));
                    }
                }
                _ => {
                    return Err(Error::parse(
                        format!("places[{i}]"),
                        format!("place shape does not match case {:?}", self.case),
                    ))
                }
            }
        }
        Ok(())
    }

    /// Sizes of the `GL` blocks of `H`, in block order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for place in &self.places {
            match place {
                Place::Symplectic { n } => out.push(*n),
                Place::Unitary { a, a_star } => {
                    out.push(*a);
                    out.push(*a_star);
                }
            }
        }
        out
    }

    /// Total number of `GL` coordinates, `sum_tau a_tau`.
    pub fn total_size(&self) -> usize {
        self.block_sizes().iter().sum()
    }

    pub fn validate_weight(&self, kappa: &AutWeight) -> Result<()> {
        let sizes = self.block_sizes();
        if kappa.parts.len() != sizes.len() {
            return Err(Error::Dimension {
                expected: sizes.len(),
                got: kappa.parts.len(),
            });
        }
        for (i, (part, &a)) in kappa.parts.iter().zip(&sizes).enumerate() {
            if part.len() != a {
                return Err(Error::Dimension {
                    expected: a,
                    got: part.len(),
                });
            }
            if part.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::domain(
                    "dominant",
                    format!("block {i} of {kappa} is not non-increasing"),
                ));
            }
        }
        Ok(())
    }

    /// The dual-side datum: a product of `gl` blocks.
    pub fn datum(&self) -> Result<RootDatum> {
        let sizes = self.block_sizes();
        let mut acc = RootDatum::gl(sizes[0])?;
        for &a in &sizes[1..] {
            acc = RootDatum::product(&acc, &RootDatum::gl(a)?)?;
        }
        Ok(acc)
    }

    /// Character of `V^2`: `sum_tau Sym^2 V_tau` in case C and
    /// `sum_tau V_tau (x) V_tau*` in case A.
    pub fn v_squared(&self) -> VirtualCharacter {
        let sizes = self.block_sizes();
        let total = self.total_size();
        let mut out = VirtualCharacter::zero();
        let mut offset = 0;
        match self.case {
            Case::C => {
                for &n in &sizes {
                    let mut w = vec![0; total];
                    w[offset] = 2;
                    out.add_term(Weight::new(w), 1);
                    offset += n;
                }
            }
            Case::A => {
                for pair in sizes.chunks(2) {
                    let mut w = vec![0; total];
                    w[offset] = 1;
                    w[offset + pair[0]] = 1;
                    out.add_term(Weight::new(w), 1);
                    offset += pair[0] + pair[1];
                }
            }
        }
        out
    }
}

impl AutWeight {
    pub fn new(parts: Vec<Vec<i64>>) -> Self {
        AutWeight { parts }
    }

    /// A weight on a single block.
    pub fn single(entries: &[i64]) -> Self {
        AutWeight::new(vec![entries.to_vec()])
    }

    pub fn flatten(&self) -> Weight {
        Weight::new(self.parts.iter().flatten().copied().collect())
    }

    /// `|kappa|`, the sum of all entries.
    pub fn abs_weight(&self) -> i64 {
        self.parts.iter().flatten().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().flatten().all(|&x| x == 0)
    }

    /// Nonzero, and the last entry of every block is nonnegative.
    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.parts.iter().all(|p| p.last().map_or(true, |&x| x >= 0))
    }

    pub fn is_even(&self) -> bool {
        self.parts.iter().flatten().all(|x| x % 2 == 0)
    }
}

pub fn is_sum_symmetric(sig: &SignatureData, kappa: &AutWeight) -> Result<bool> {
    sig.validate_weight(kappa)?;
    if sig.case != Case::A {
        return Err(Error::domain(
            "case_a",
            "sum symmetry needs paired places",
        ));
    }
    Ok(kappa
        .parts
        .chunks(2)
        .all(|pair| pair[0].iter().sum::<i64>() == pair[1].iter().sum::<i64>()))
}

/// Positive and even in case C, positive and sum-symmetric in case A.
pub fn is_admissible_characterized(sig: &SignatureData, kappa: &AutWeight) -> Result<bool> {
    sig.validate_weight(kappa)?;
    Ok(kappa.is_positive()
        && match sig.case {
            Case::C => kappa.is_even(),
            Case::A => is_sum_symmetric(sig, kappa)?,
        })
}

/// The character `(V^2)^{(x) e}` or `Sym^e(V^2)`.
pub fn v_squared_power(sig: &SignatureData, e: u32, mode: PowerMode) -> Result<VirtualCharacter> {
    if e == 0 {
        return Err(Error::domain("power_positive", "depth must be >= 1"));
    }
    let size = e as usize * sig.total_size();
    if size > MAX_CONSTITUENT_SIZE {
        return Err(Error::resource(
            "MAX_CONSTITUENT_SIZE",
            format!("e * sum a_tau = {size} exceeds {MAX_CONSTITUENT_SIZE}"),
        ));
    }
    let datum = sig.datum()?;
    let v2 = sig.v_squared();
    match mode {
        PowerMode::Tensor => tensor_power_of(&datum, &v2, e),
        PowerMode::Sym => sym_power_of(&datum, &v2, e),
    }
}

/// Whether `lambda` has positive multiplicity in the `e`-th power of `V^2`.
pub fn is_constituent_depth_e(
    sig: &SignatureData,
    lambda: &AutWeight,
    e: u32,
    mode: PowerMode,
) -> Result<bool> {
    sig.validate_weight(lambda)?;
    let power = v_squared_power(sig, e, mode)?;
    Ok(power.coeff(&lambda.flatten()) > 0)
}

/// All constituents of the `e`-th power, with multiplicities.
pub fn constituents(
    sig: &SignatureData,
    e: u32,
    mode: PowerMode,
) -> Result<Vec<(AutWeight, i64)>> {
    let power = v_squared_power(sig, e, mode)?;
    let datum = sig.datum()?;
    let doc = power.to_doc(&datum);
    let sizes = sig.block_sizes();
    Ok(doc
        .terms
        .into_iter()
        .map(|t| (split_blocks(&t.weight, &sizes), t.coeff))
        .collect())
}

pub(crate) fn split_blocks(flat: &[i64], sizes: &[usize]) -> AutWeight {
    let mut parts = Vec::with_capacity(sizes.len());
    let mut offset = 0;
    for &a in sizes {
        parts.push(flat[offset..offset + a].to_vec());
        offset += a;
    }
    AutWeight::new(parts)
}

/// `e_lambda = |lambda| / 2` for an admissible weight.
pub fn depth(sig: &SignatureData, lambda: &AutWeight) -> Result<i64> {
    if !is_admissible_characterized(sig, lambda)? {
        return Err(Error::domain(
            "admissible",
            format!("{lambda} is not admissible"),
        ));
    }
    let abs = lambda.abs_weight();
    assert!(abs > 0 && abs % 2 == 0, "admissible weights have positive even size");
    Ok(abs / 2)
}

/// `kappa + lambda + (p - 1) |lambda| / 2` in every entry.
pub fn weight_shift(
    sig: &SignatureData,
    kappa: &AutWeight,
    lambda: &AutWeight,
    p: u64,
) -> Result<AutWeight> {
    sig.validate_weight(kappa)?;
    let e = depth(sig, lambda)?;
    let scalar = (p as i64 - 1) * e;
    let out = AutWeight::new(
        kappa
            .parts
            .iter()
            .zip(&lambda.parts)
            .map(|(k, l)| k.iter().zip(l).map(|(a, b)| a + b + scalar).collect())
            .collect(),
    );
    sig.validate_weight(&out)?;
    Ok(out)
}

/// Dominant weights of a single `GL_n` block with entries in `[lo, hi]`.
pub fn dominant_tuples(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, lo: i64, hi: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let top = cur.last().copied().unwrap_or(hi);
        for x in (lo..=top).rev() {
            cur.push(x);
            rec(n, lo, hi, cur, out);
            cur.pop();
        }
    }
    rec(n, lo, hi, &mut cur, &mut out);
    out
}

/// One row of the comparison between the characterized predicate and the
/// constituent tests.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconciliationRow {
    pub lambda: AutWeight,
    pub characterized: bool,
    pub sym: bool,
    pub tensor: bool,
}

/// Compares the characterized predicate with both constituent tests for
/// every dominant single-block weight with entries in `[lo, hi]` and
/// `|lambda| <= max_abs`. Weights of odd or nonpositive size occur in no
/// power of `V^2`.
pub fn reconcile_case_c(n: usize, lo: i64, hi: i64, max_abs: i64) -> Result<Vec<ReconciliationRow>> {
    let sig = SignatureData::siegel(n)?;
    let mut rows = Vec::new();
    let mut powers = std::collections::BTreeMap::new();
    for tuple in dominant_tuples(n, lo, hi) {
        let lambda = AutWeight::single(&tuple);
        let abs = lambda.abs_weight();
        if abs.abs() > max_abs {
            continue;
        }
        let characterized = is_admissible_characterized(&sig, &lambda)?;
        let (sym, tensor) = if abs > 0 && abs % 2 == 0 {
            let e = (abs / 2) as u32;
            if !powers.contains_key(&e) {
                powers.insert(
                    e,
                    (
                        v_squared_power(&sig, e, PowerMode::Sym)?,
                        v_squared_power(&sig, e, PowerMode::Tensor)?,
                    ),
                );
            }
            let (s, t) = &powers[&e];
            let w = lambda.flatten();
            (s.coeff(&w) > 0, t.coeff(&w) > 0)
        } else {
            (false, false)
        };
        rows.push(ReconciliationRow {
            lambda,
            characterized,
            sym,
            tensor,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abs_weight_examples() {
        assert_eq!(AutWeight::single(&[2, 2]).abs_weight(), 4);
        assert_eq!(AutWeight::single(&[0, 0]).abs_weight(), 0);
        assert_eq!(AutWeight::new(vec![vec![1, 1], vec![2]]).abs_weight(), 4);
    }

    #[test]
    fn predicates() {
        let siegel = SignatureData::siegel(2).unwrap();
        let w20 = AutWeight::single(&[2, 0]);
        let w31 = AutWeight::single(&[3, 1]);
        assert!(w20.is_positive() && w20.is_even());
        assert!(w31.is_positive() && !w31.is_even());
        assert!(is_admissible_characterized(&siegel, &w20).unwrap());
        assert!(!is_admissible_characterized(&siegel, &w31).unwrap());
        assert!(is_sum_symmetric(&siegel, &w20).is_err());

        let unitary = SignatureData::new(Case::A, vec![Place::Unitary { a: 2, a_star: 1 }]).unwrap();
        let k = AutWeight::new(vec![vec![1, 1], vec![2]]);
        assert!(is_sum_symmetric(&unitary, &k).unwrap());
        assert!(is_admissible_characterized(&unitary, &k).unwrap());
        let herm = SignatureData::new(Case::A, vec![Place::Unitary { a: 1, a_star: 1 }]).unwrap();
        for d in 1..4 {
            for d_star in 1..4 {
                let k = AutWeight::new(vec![vec![d], vec![d_star]]);
                assert_eq!(is_admissible_characterized(&herm, &k).unwrap(), d == d_star);
            }
        }
        let g1 = SignatureData::siegel(1).unwrap();
        for m in 1..5 {
            assert!(is_admissible_characterized(&g1, &AutWeight::single(&[2 * m])).unwrap());
            assert!(!is_admissible_characterized(&g1, &AutWeight::single(&[2 * m - 1])).unwrap());
        }
    }

    #[test]
    fn signature_validation() {
        assert!(SignatureData::new(
            Case::A,
            vec![Place::Unitary { a: 2, a_star: 1 }, Place::Unitary { a: 1, a_star: 1 }]
        )
        .is_err());
        assert!(SignatureData::new(Case::C, vec![Place::Unitary { a: 1, a_star: 1 }]).is_err());
        let s = SignatureData::from_json(r#"{"case":"A","places":[{"a":2,"a_star":1}]}"#).unwrap();
        assert_eq!(s.block_sizes(), vec![2, 1]);
        let s = SignatureData::from_json(r#"{"case":"C","places":[{"n":3}]}"#).unwrap();
        assert_eq!(s.block_sizes(), vec![3]);
        let siegel = SignatureData::siegel(2).unwrap();
        assert!(siegel.validate_weight(&AutWeight::single(&[0, 2])).is_err());
        assert!(siegel.validate_weight(&AutWeight::single(&[2])).is_err());
    }

    #[test]
    fn constituent_examples() {
        let siegel = SignatureData::siegel(2).unwrap();
        let c = |l: &[i64], e, m| is_constituent_depth_e(&siegel, &AutWeight::single(l), e, m).unwrap();
        assert!(c(&[2, 0], 1, PowerMode::Tensor));
        assert!(c(&[2, 0], 1, PowerMode::Sym));
        assert!(c(&[3, 1], 2, PowerMode::Tensor));
        assert!(!c(&[3, 1], 2, PowerMode::Sym));
        assert!(c(&[4, 0], 2, PowerMode::Tensor));
        assert!(c(&[4, 0], 2, PowerMode::Sym));
        assert!(is_constituent_depth_e(&siegel, &AutWeight::single(&[2, 0]), 0, PowerMode::Sym).is_err());
        assert!(v_squared_power(&siegel, 30, PowerMode::Sym).unwrap_err().is_resource());

        let unitary = SignatureData::new(Case::A, vec![Place::Unitary { a: 2, a_star: 1 }]).unwrap();
        let k = AutWeight::new(vec![vec![1, 0], vec![1]]);
        assert!(is_constituent_depth_e(&unitary, &k, 1, PowerMode::Tensor).unwrap());
    }

    #[test]
    fn depth_and_shift() {
        let siegel = SignatureData::siegel(2).unwrap();
        assert_eq!(depth(&siegel, &AutWeight::single(&[2, 0])).unwrap(), 1);
        assert_eq!(depth(&siegel, &AutWeight::single(&[2, 2])).unwrap(), 2);
        assert!(depth(&siegel, &AutWeight::single(&[3, 1])).is_err());
        let g1 = SignatureData::siegel(1).unwrap();
        assert_eq!(depth(&g1, &AutWeight::single(&[2])).unwrap(), 1);

        let shifted = weight_shift(
            &siegel,
            &AutWeight::single(&[4, 2]),
            &AutWeight::single(&[2, 0]),
            5,
        )
        .unwrap();
        assert_eq!(shifted, AutWeight::single(&[10, 6]));
        for p in [5u64, 7, 11] {
            let mut k = AutWeight::single(&[12]);
            for e in 1..4 {
                k = weight_shift(&g1, &k, &AutWeight::single(&[2]), p).unwrap();
                assert_eq!(k.parts[0][0], 12 + e * (p as i64 + 1));
            }
        }
        assert!(weight_shift(&siegel, &AutWeight::single(&[4, 2]), &AutWeight::single(&[3, 1]), 5).is_err());
    }

    #[test]
    fn reconciliation_gl2_depth_two() {
        let rows = reconcile_case_c(2, -2, 10, 4).unwrap();
        let tensor_only: Vec<&AutWeight> = rows
            .iter()
            .filter(|r| r.lambda.abs_weight() == 4 && r.tensor != r.characterized)
            .map(|r| &r.lambda)
            .collect();
        assert_eq!(tensor_only, vec![&AutWeight::single(&[3, 1])]);
        assert!(rows.iter().all(|r| r.characterized == r.sym));
    }
}

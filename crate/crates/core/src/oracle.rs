//! Slow reference computations used to cross-check the main kernels.
//!
//! Nothing here shares code with the algorithms it checks: characters come
//! from dividing the Weyl alternant by the Weyl denominator, Kostant
//! partitions are enumerated one by one, the GL(2) Hecke product is a direct
//! count over single cosets, and `Delta` comes from its product expansion.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::laurent::LaurentV;
use crate::root_data::{RootDatum, Weight};

type Char = BTreeMap<Vec<i64>, i64>;

fn add(map: &mut Char, k: Vec<i64>, c: i64) {
    if c == 0 {
        return;
    }
    let e = map.entry(k.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        map.remove(&k);
    }
}

/// Exact quotient `p / (1 - e^{-alpha})`. Along every line `x + Z alpha` the
/// quotient is the suffix sum `q(x) = sum_{k>=0} p(x + k alpha)`.
fn divide_by_factor(p: &Char, alpha: &[i64]) -> Char {
    let i = alpha.iter().position(|&a| a != 0).expect("nonzero root");
    let ai = alpha[i];
    let mut lines: BTreeMap<Vec<i64>, BTreeMap<i64, i64>> = BTreeMap::new();
    for (x, &c) in p {
        let t = x[i].div_euclid(ai);
        let base: Vec<i64> = x.iter().zip(alpha).map(|(a, b)| a - t * b).collect();
        *lines.entry(base).or_default().entry(t).or_insert(0) += c;
    }
    let mut out = Char::new();
    for (base, pts) in lines {
        let lo = *pts.keys().next().unwrap();
        let hi = *pts.keys().next_back().unwrap();
        let mut acc = 0;
        for t in (lo..=hi).rev() {
            acc += pts.get(&t).copied().unwrap_or(0);
            let x: Vec<i64> = base.iter().zip(alpha).map(|(a, b)| a + t * b).collect();
            add(&mut out, x, acc);
        }
        assert_eq!(acc, 0, "Weyl denominator must divide the alternant");
    }
    out
}

/// Full character of the irreducible representation of highest weight
/// `lambda`: every weight with its multiplicity.
pub fn weyl_character(datum: &RootDatum, lambda: &Weight) -> Result<BTreeMap<Weight, i64>> {
    let two_rho = datum.two_rho_check();
    let top = Weight::new(
        lambda
            .coords
            .iter()
            .zip(two_rho)
            .map(|(a, r)| 2 * a + r)
            .collect(),
    );
    let mut alternant = Char::new();
    for w in &datum.weyl_group()?.elements {
        let moved = w.apply(&top);
        let x: Vec<i64> = moved
            .coords
            .iter()
            .zip(two_rho)
            .map(|(a, r)| {
                assert_eq!((a - r) % 2, 0);
                (a - r) / 2
            })
            .collect();
        add(&mut alternant, x, w.sign);
    }
    let mut cur = alternant;
    for alpha in datum.positive_coroots() {
        cur = divide_by_factor(&cur, alpha);
    }
    Ok(cur.into_iter().map(|(k, v)| (Weight::new(k), v)).collect())
}

/// The orbit-sum product `m_a * m_b` expanded into single weights.
pub fn orbit_product(datum: &RootDatum, a: &Weight, b: &Weight) -> BTreeMap<Weight, i64> {
    let mut out = BTreeMap::new();
    for x in datum.weyl_orbit(a) {
        for y in datum.weyl_orbit(b) {
            *out.entry(x.add(&y)).or_insert(0) += 1;
        }
    }
    out
}

/// q-graded Kostant partition function by explicit enumeration of
/// multisets of positive coroots.
pub fn kostant_exhaustive(datum: &RootDatum, beta: &[i64]) -> LaurentV {
    fn rec(
        coroots: &[Vec<i64>],
        idx: usize,
        rest: &mut Vec<i64>,
        parts: i32,
        out: &mut LaurentV,
        bound: &dyn Fn(&[i64]) -> bool,
    ) {
        if rest.iter().all(|&x| x == 0) {
            out.add_term(2 * parts, 1);
            return;
        }
        if idx == coroots.len() || !bound(rest) {
            return;
        }
        rec(coroots, idx + 1, rest, parts, out, bound);
        let c = &coroots[idx];
        let mut taken: i64 = 0;
        loop {
            for (r, x) in rest.iter_mut().zip(c) {
                *r -= x;
            }
            taken += 1;
            if !bound(rest) {
                break;
            }
            rec(coroots, idx + 1, rest, parts + taken as i32, out, bound);
        }
        for (r, x) in rest.iter_mut().zip(c) {
            *r += taken * x;
        }
    }
    let two_rho = datum.two_rho().to_vec();
    // Every positive coroot pairs positively with 2 rho, so the remainder
    // must keep a nonnegative pairing.
    let bound = move |r: &[i64]| -> bool { r.iter().zip(&two_rho).map(|(a, b)| a * b).sum::<i64>() >= 0 };
    let mut out = LaurentV::zero();
    let mut rest = beta.to_vec();
    rec(datum.positive_coroots(), 0, &mut rest, 0, &mut out, &bound);
    out
}

/// `K_{lambda,mu}(q)` from the alternating sum, with partitions enumerated
/// exhaustively.
pub fn lusztig_exhaustive(datum: &RootDatum, lambda: &Weight, mu: &Weight) -> Result<LaurentV> {
    let two_rho = datum.two_rho_check();
    let top = Weight::new(lambda.coords.iter().zip(two_rho).map(|(a, r)| 2 * a + r).collect());
    let mut acc = LaurentV::zero();
    for w in &datum.weyl_group()?.elements {
        let moved = w.apply(&top);
        let beta: Vec<i64> = moved
            .coords
            .iter()
            .zip(&mu.coords)
            .zip(two_rho)
            .map(|((a, m), r)| a - 2 * m - r)
            .collect();
        if beta.iter().any(|b| b % 2 != 0) {
            continue;
        }
        let beta: Vec<i64> = beta.iter().map(|b| b / 2).collect();
        acc += &kostant_exhaustive(datum, &beta).scale(w.sign);
    }
    Ok(acc)
}

fn valuation(b: u64, q: u64) -> u32 {
    let mut v = 0;
    let mut b = b;
    while b % q == 0 {
        b /= q;
        v += 1;
    }
    v
}

/// Single cosets `x K` in `K diag(pi^l1, pi^l2) K`, as `(a, d, b)` for the
/// representative `[[pi^a, b], [0, pi^d]]` with `0 <= b < q^a`.
fn gl2_cosets(q: u64, lambda: (i64, i64)) -> Vec<(i64, i64, u64)> {
    let (l1, l2) = lambda;
    let mut out = Vec::new();
    for a in 0..=(l1 + l2) {
        let d = l1 + l2 - a;
        if a < l2 || d < l2 {
            continue;
        }
        for b in 0..q.pow(a as u32) {
            let vb = if b == 0 { i64::MAX } else { valuation(b, q) as i64 };
            if a.min(d).min(vb) == l2 {
                out.push((a, d, b));
            }
        }
    }
    out
}

/// Coefficients of `c_lambda * c_mu` for `GL(2)` over a local field with
/// residue field of size `q`, by counting single cosets. Weights must have
/// nonnegative entries.
pub fn gl2_convolution(q: u64, lambda: (i64, i64), mu: (i64, i64)) -> BTreeMap<(i64, i64), i64> {
    assert!(lambda.1 >= 0 && mu.1 >= 0 && lambda.0 >= lambda.1 && mu.0 >= mu.1);
    let cosets = gl2_cosets(q, lambda);
    assert_eq!(
        cosets.len() as u64,
        if lambda.0 == lambda.1 { 1 } else { q.pow((lambda.0 - lambda.1 - 1) as u32) * (q + 1) },
        "coset count"
    );
    let total = lambda.0 + lambda.1 + mu.0 + mu.1;
    let mut out = BTreeMap::new();
    for n2 in 0..=total / 2 {
        let n1 = total - n2;
        // x^-1 diag(pi^n1, pi^n2) = [[pi^{n1-a}, -b pi^{n2-a-d}], [0, pi^{n2-d}]]
        let count = cosets
            .iter()
            .filter(|&&(a, d, b)| {
                let v11 = n1 - a;
                let v22 = n2 - d;
                let v12 = if b == 0 {
                    i64::MAX
                } else {
                    valuation(b, q) as i64 + n2 - a - d
                };
                v11.min(v22).min(v12) == mu.1 && v11 + v22 == mu.0 + mu.1
            })
            .count() as i64;
        if count != 0 {
            out.insert((n1, n2), count);
        }
    }
    out
}

/// `Delta = q prod_{n>=1} (1 - q^n)^24` through `q^trunc`.
pub fn delta_product(trunc: usize) -> Vec<BigInt> {
    let mut series = vec![BigInt::zero(); trunc + 1];
    if trunc >= 1 {
        series[1] = BigInt::from(1);
    }
    for n in 1..=trunc {
        for _ in 0..24 {
            for i in (n..=trunc).rev() {
                let prev = series[i - n].clone();
                series[i] -= prev;
            }
        }
    }
    series
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight::from(v)
    }

    #[test]
    fn adjoint_of_gl3_from_orbit_sums() {
        let gl3 = RootDatum::gl(3).unwrap();
        let mut prod = orbit_product(&gl3, &w(&[1, 0, 0]), &w(&[0, 0, -1]));
        *prod.get_mut(&w(&[0, 0, 0])).unwrap() -= 1;
        assert_eq!(prod[&w(&[1, 0, -1])], 1);
        assert_eq!(prod[&w(&[0, 0, 0])], 2);
        assert_eq!(weyl_character(&gl3, &w(&[1, 0, -1])).unwrap(), prod.into_iter().filter(|(_, c)| *c != 0).collect());
    }

    #[test]
    fn weyl_character_small() {
        let gl2 = RootDatum::gl(2).unwrap();
        let c = weyl_character(&gl2, &w(&[2, 0])).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.values().all(|&m| m == 1));
        let gsp4 = RootDatum::gsp(4).unwrap();
        assert_eq!(weyl_character(&gsp4, &w(&[1, 1, 1])).unwrap().len(), 4);
    }

    #[test]
    fn kostant_enumeration() {
        let gl3 = RootDatum::gl(3).unwrap();
        assert_eq!(
            kostant_exhaustive(&gl3, &[1, 0, -1]),
            LaurentV::from_terms([(2, 1), (4, 1)])
        );
        assert_eq!(
            lusztig_exhaustive(&gl3, &w(&[2, 1, 0]), &w(&[1, 1, 1])).unwrap(),
            LaurentV::from_terms([(2, 1), (4, 1)])
        );
    }

    #[test]
    fn gl2_cosets_give_the_classical_product() {
        for q in [2u64, 3] {
            let p = gl2_convolution(q, (1, 0), (1, 0));
            assert_eq!(p[&(2, 0)], 1);
            assert_eq!(p[&(1, 1)], q as i64 + 1);
            let p = gl2_convolution(q, (1, 1), (1, 0));
            assert_eq!(p.into_iter().collect::<Vec<_>>(), vec![((2, 1), 1)]);
        }
    }

    #[test]
    fn delta_from_product() {
        let d = delta_product(5);
        let expected: Vec<BigInt> = [0, 1, -24, 252, -1472, 4830].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(d, expected);
    }
}

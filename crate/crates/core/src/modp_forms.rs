//! Level one modular forms mod `p` as truncated q-expansions.
//!
//! Forms of weight `k` are spanned by `E4^a E6^b Delta^c` with
//! `4a + 6b + 12c = k`. A form mod `p` is identified by its coefficients up
//! to the Sturm bound `floor(k/12) + 1`, which is what filtration and all
//! identity tests use.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, FiniteField};
use crate::galois_twist::{check_twist_theorem, EigenSystem, TwistReport};
use crate::root_data::{RootDatum, Weight};
use crate::satake::SatakeMatrices;

/// Coefficients `a_0..a_N` over `Q` or `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Rational(Vec<BigRational>),
    ModP { p: u64, a: Vec<u64> },
}

/// A truncated q-expansion `sum_{n<=N} a_n q^n` labelled with a weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: i64,
    pub coeffs: Coefficients,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QExpansionDoc {
    pub ring: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    pub weight: i64,
    pub coeffs: Vec<String>,
    pub trunc: usize,
}

fn require_supported_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::domain("p_prime", format!("{p} is not prime")));
    }
    if p < 5 {
        return Err(Error::domain("p_at_least_5", format!("p = {p} is not supported")));
    }
    Ok(())
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// `l^e mod p` for any integer `e`, `p` not dividing `l`.
fn pow_mod_signed(l: u64, e: i64, p: u64) -> u64 {
    if e >= 0 {
        pow_mod(l, e as u64, p)
    } else {
        pow_mod(inv_mod(l % p, p), e.unsigned_abs(), p)
    }
}

fn mul_mod_series(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().min(b.len());
    let mut out = vec![0u64; n];
    for (i, &x) in a[..n].iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b[..n - i].iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    out
}

fn mul_int_series(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().min(b.len());
    let mut out = vec![BigInt::zero(); n];
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

/// `sigma_r(n)` for `1 <= n <= trunc`, as integers.
fn sigma_table(r: u32, trunc: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); trunc + 1];
    for d in 1..=trunc {
        let dr = BigInt::from(d).pow(r);
        let mut m = d;
        while m <= trunc {
            out[m] += &dr;
            m += d;
        }
    }
    out
}

fn sigma_table_mod(r: u64, trunc: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; trunc + 1];
    for d in 1..=trunc {
        let dr = pow_mod(d as u64, r, p);
        let mut m = d;
        while m <= trunc {
            out[m] = (out[m] + dr) % p;
            m += d;
        }
    }
    out
}

fn eisenstein_int(c: i64, r: u32, trunc: usize) -> Vec<BigInt> {
    let sig = sigma_table(r, trunc);
    let mut out: Vec<BigInt> = sig.into_iter().map(|s| s * c).collect();
    out[0] = BigInt::one();
    out
}

fn rational(v: Vec<BigInt>) -> Vec<BigRational> {
    v.into_iter().map(BigRational::from_integer).collect()
}

/// `E4 = 1 + 240 sum sigma_3(n) q^n` over `Q`.
pub fn eisenstein4(trunc: usize) -> QExpansion {
    QExpansion {
        weight: 4,
        coeffs: Coefficients::Rational(rational(eisenstein_int(240, 3, trunc))),
    }
}

/// `E6 = 1 - 504 sum sigma_5(n) q^n` over `Q`.
pub fn eisenstein6(trunc: usize) -> QExpansion {
    QExpansion {
        weight: 6,
        coeffs: Coefficients::Rational(rational(eisenstein_int(-504, 5, trunc))),
    }
}

/// `Delta = (E4^3 - E6^2) / 1728` over `Q`.
pub fn delta(trunc: usize) -> QExpansion {
    let e4 = eisenstein_int(240, 3, trunc);
    let e6 = eisenstein_int(-504, 5, trunc);
    let e4c = mul_int_series(&mul_int_series(&e4, &e4), &e4);
    let e6s = mul_int_series(&e6, &e6);
    let d: Vec<BigInt> = e4c
        .iter()
        .zip(&e6s)
        .map(|(a, b)| {
            let x: BigInt = a - b;
            assert!((&x % BigInt::from(1728)).is_zero(), "Delta has integer coefficients");
            x / 1728
        })
        .collect();
    QExpansion {
        weight: 12,
        coeffs: Coefficients::Rational(rational(d)),
    }
}

fn e4_mod(p: u64, trunc: usize) -> Vec<u64> {
    let mut v: Vec<u64> = sigma_table_mod(3, trunc, p)
        .into_iter()
        .map(|s| s * (240 % p) % p)
        .collect();
    v[0] = 1;
    v
}

fn e6_mod(p: u64, trunc: usize) -> Vec<u64> {
    let c = (p - 504 % p) % p;
    let mut v: Vec<u64> = sigma_table_mod(5, trunc, p)
        .into_iter()
        .map(|s| s * c % p)
        .collect();
    v[0] = 1;
    v
}

fn delta_mod(p: u64, trunc: usize) -> Vec<u64> {
    let e4 = e4_mod(p, trunc);
    let e6 = e6_mod(p, trunc);
    let e4c = mul_mod_series(&mul_mod_series(&e4, &e4, p), &e4, p);
    let e6s = mul_mod_series(&e6, &e6, p);
    let inv = inv_mod(1728 % p, p);
    e4c.iter()
        .zip(&e6s)
        .map(|(a, b)| ((a + p - b) % p) * inv % p)
        .collect()
}

/// `dim M_k(SL_2(Z))`.
pub fn dim_mk(k: i64) -> usize {
    if k < 0 || k % 2 != 0 || k == 2 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// Number of leading coefficients that determine a weight-`k` form.
pub fn sturm_bound(k: i64) -> usize {
    (k.max(0) / 12) as usize + 1
}

type BasisCache = RwLock<HashMap<(i64, u64, usize), Arc<Vec<QExpansion>>>>;

fn basis_cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Reductions mod `p` of `E4^a E6^b Delta^c`, `c = 0..dim M_k - 1`.
pub fn basis(k: i64, p: u64, trunc: usize) -> Result<Arc<Vec<QExpansion>>> {
    require_supported_prime(p)?;
    let key = (k, p, trunc);
    if let Some(b) = basis_cache().read().expect("cache lock").get(&key) {
        return Ok(Arc::clone(b));
    }
    let dim = dim_mk(k);
    let e4 = e4_mod(p, trunc);
    let e6 = e6_mod(p, trunc);
    let d = delta_mod(p, trunc);
    let mut out = Vec::with_capacity(dim);
    let mut delta_pow = {
        let mut one = vec![0u64; trunc + 1];
        one[0] = 1;
        one
    };
    for c in 0..dim as i64 {
        let rest = k - 12 * c;
        let b = if rest % 4 == 0 { 0 } else { 1 };
        let a = (rest - 6 * b) / 4;
        assert!(a >= 0, "monomial exponents are nonnegative");
        let mut series = delta_pow.clone();
        for _ in 0..a {
            series = mul_mod_series(&series, &e4, p);
        }
        for _ in 0..b {
            series = mul_mod_series(&series, &e6, p);
        }
        out.push(QExpansion {
            weight: k,
            coeffs: Coefficients::ModP { p, a: series },
        });
        delta_pow = mul_mod_series(&delta_pow, &d, p);
    }
    let arc = Arc::new(out);
    let mut guard = basis_cache().write().expect("cache lock");
    Ok(Arc::clone(guard.entry(key).or_insert(arc)))
}

/// The Hasse invariant: the constant series 1 in weight `p - 1`.
pub fn hasse(p: u64, trunc: usize) -> Result<QExpansion> {
    require_supported_prime(p)?;
    let mut a = vec![0u64; trunc + 1];
    a[0] = 1;
    Ok(QExpansion {
        weight: p as i64 - 1,
        coeffs: Coefficients::ModP { p, a },
    })
}

impl QExpansion {
    /// A series mod `p` from its coefficients (reduced into `[0, p)`).
    pub fn mod_p(p: u64, weight: i64, coeffs: &[i64]) -> Result<QExpansion> {
        require_supported_prime(p)?;
        if coeffs.is_empty() {
            return Err(Error::domain("nonempty", "a q-expansion needs a_0"));
        }
        Ok(QExpansion {
            weight,
            coeffs: Coefficients::ModP {
                p,
                a: coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect(),
            },
        })
    }

    /// `N`, the index of the last known coefficient.
    pub fn trunc(&self) -> usize {
        match &self.coeffs {
            Coefficients::Rational(v) => v.len() - 1,
            Coefficients::ModP { a, .. } => a.len() - 1,
        }
    }

    pub fn prime(&self) -> Option<u64> {
        match &self.coeffs {
            Coefficients::ModP { p, .. } => Some(*p),
            Coefficients::Rational(_) => None,
        }
    }

    fn modp(&self) -> Result<(u64, &[u64])> {
        match &self.coeffs {
            Coefficients::ModP { p, a } => Ok((*p, a)),
            Coefficients::Rational(_) => Err(Error::domain(
                "ring_fp",
                "operation is defined on q-expansions mod p",
            )),
        }
    }

    /// Coefficients mod `p`; panics on a rational series.
    pub fn coeffs_mod_p(&self) -> &[u64] {
        self.modp().expect("series over F_p").1
    }

    /// Coefficient `a_n` of a rational series.
    pub fn rational_coeff(&self, n: usize) -> Option<&BigRational> {
        match &self.coeffs {
            Coefficients::Rational(v) => v.get(n),
            Coefficients::ModP { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coefficients::Rational(v) => v.iter().all(Zero::is_zero),
            Coefficients::ModP { a, .. } => a.iter().all(|&x| x == 0),
        }
    }

    /// Reduction mod `p`; denominators must be prime to `p`.
    pub fn reduce(&self, p: u64) -> Result<QExpansion> {
        require_supported_prime(p)?;
        let v = match &self.coeffs {
            Coefficients::Rational(v) => v,
            Coefficients::ModP { .. } => return Err(Error::domain("ring_q", "series is already mod p")),
        };
        let pb = BigInt::from(p);
        let mut a = Vec::with_capacity(v.len());
        for (n, c) in v.iter().enumerate() {
            let num = ((c.numer() % &pb + &pb) % &pb).to_u64().expect("residue fits");
            let den = ((c.denom() % &pb + &pb) % &pb).to_u64().expect("residue fits");
            if den == 0 {
                return Err(Error::domain(
                    "p_integral",
                    format!("coefficient a_{n} = {c} has p in its denominator"),
                ));
            }
            a.push(num * inv_mod(den, p) % p);
        }
        Ok(QExpansion {
            weight: self.weight,
            coeffs: Coefficients::ModP { p, a },
        })
    }

    /// Truncates to `a_0..a_n`.
    pub fn truncate(&self, n: usize) -> Result<QExpansion> {
        if n > self.trunc() {
            return Err(Error::domain(
                "truncation_sufficient",
                format!("series is known to q^{} only, {n} requested", self.trunc()),
            ));
        }
        let coeffs = match &self.coeffs {
            Coefficients::Rational(v) => Coefficients::Rational(v[..=n].to_vec()),
            Coefficients::ModP { p, a } => Coefficients::ModP {
                p: *p,
                a: a[..=n].to_vec(),
            },
        };
        Ok(QExpansion {
            weight: self.weight,
            coeffs,
        })
    }

    fn same_prime(&self, other: &QExpansion) -> Result<u64> {
        let (p, _) = self.modp()?;
        let (q, _) = other.modp()?;
        if p != q {
            return Err(Error::domain("same_ring", format!("F_{p} and F_{q} series")));
        }
        Ok(p)
    }

    /// Product; weights add and the truncation is the smaller one.
    pub fn mul(&self, other: &QExpansion) -> Result<QExpansion> {
        let p = self.same_prime(other)?;
        Ok(QExpansion {
            weight: self.weight + other.weight,
            coeffs: Coefficients::ModP {
                p,
                a: mul_mod_series(self.coeffs_mod_p(), other.coeffs_mod_p(), p),
            },
        })
    }

    /// Coefficientwise sum of two series of the same weight label.
    pub fn add(&self, other: &QExpansion) -> Result<QExpansion> {
        let p = self.same_prime(other)?;
        let (a, b) = (self.coeffs_mod_p(), other.coeffs_mod_p());
        let n = a.len().min(b.len());
        Ok(QExpansion {
            weight: self.weight,
            coeffs: Coefficients::ModP {
                p,
                a: (0..n).map(|i| (a[i] + b[i]) % p).collect(),
            },
        })
    }

    pub fn scale(&self, c: i64) -> Result<QExpansion> {
        let (p, a) = self.modp()?;
        let c = c.rem_euclid(p as i64) as u64;
        Ok(QExpansion {
            weight: self.weight,
            coeffs: Coefficients::ModP {
                p,
                a: a.iter().map(|x| x * c % p).collect(),
            },
        })
    }

    /// Same coefficients with a different weight label.
    pub fn with_weight(&self, weight: i64) -> QExpansion {
        QExpansion {
            weight,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn to_doc(&self) -> QExpansionDoc {
        match &self.coeffs {
            Coefficients::Rational(v) => QExpansionDoc {
                ring: "Q".into(),
                p: None,
                weight: self.weight,
                coeffs: v.iter().map(|c| c.to_string()).collect(),
                trunc: self.trunc(),
            },
            Coefficients::ModP { p, a } => QExpansionDoc {
                ring: "Fp".into(),
                p: Some(*p),
                weight: self.weight,
                coeffs: a.iter().map(|c| c.to_string()).collect(),
                trunc: self.trunc(),
            },
        }
    }

    pub fn from_doc(doc: &QExpansionDoc) -> Result<QExpansion> {
        if doc.coeffs.len() != doc.trunc + 1 {
            return Err(Error::parse(
                "trunc",
                format!("{} coefficients given for truncation {}", doc.coeffs.len(), doc.trunc),
            ));
        }
        match doc.ring.as_str() {
            "Q" => {
                let v = doc
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        s.parse::<BigRational>()
                            .map_err(|e| Error::parse(format!("coeffs[{i}]"), e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(QExpansion {
                    weight: doc.weight,
                    coeffs: Coefficients::Rational(v),
                })
            }
            "Fp" => {
                let p = doc.p.ok_or_else(|| Error::parse("p", "ring Fp needs p"))?;
                let v = doc
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        s.parse::<i64>()
                            .map_err(|e| Error::parse(format!("coeffs[{i}]"), e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                QExpansion::mod_p(p, doc.weight, &v)
            }
            other => Err(Error::parse("ring", format!("unknown ring `{other}`"))),
        }
    }
}

/// Reductions of `E4`, `E6`, `Delta` computed directly mod `p`.
pub fn eisenstein4_mod(p: u64, trunc: usize) -> Result<QExpansion> {
    require_supported_prime(p)?;
    Ok(QExpansion {
        weight: 4,
        coeffs: Coefficients::ModP { p, a: e4_mod(p, trunc) },
    })
}

pub fn eisenstein6_mod(p: u64, trunc: usize) -> Result<QExpansion> {
    require_supported_prime(p)?;
    Ok(QExpansion {
        weight: 6,
        coeffs: Coefficients::ModP { p, a: e6_mod(p, trunc) },
    })
}

pub fn delta_mod_p(p: u64, trunc: usize) -> Result<QExpansion> {
    require_supported_prime(p)?;
    Ok(QExpansion {
        weight: 12,
        coeffs: Coefficients::ModP { p, a: delta_mod(p, trunc) },
    })
}

/// `theta(sum a_n q^n) = sum n a_n q^n`, of weight `k + p + 1`.
pub fn theta(f: &QExpansion) -> Result<QExpansion> {
    theta_with_weight(f, None)
}

fn theta_with_weight(f: &QExpansion, weight: Option<i64>) -> Result<QExpansion> {
    let (p, a) = f.modp()?;
    Ok(QExpansion {
        weight: weight.unwrap_or(f.weight + p as i64 + 1),
        coeffs: Coefficients::ModP {
            p,
            a: a.iter()
                .enumerate()
                .map(|(n, x)| (n as u64 % p) * x % p)
                .collect(),
        },
    })
}

/// `T_l` at level one: `b_n = a_{nl} + l^{k-1} a_{n/l}`, known to
/// `floor(N / l)`.
pub fn hecke_t(ell: u64, f: &QExpansion) -> Result<QExpansion> {
    if !is_prime(ell) {
        return Err(Error::domain("ell_prime", format!("{ell} is not prime")));
    }
    let (p, a) = f.modp()?;
    if ell == p {
        return Err(Error::domain("ell_not_p", format!("T_{ell} at the prime p = {p}")));
    }
    let l = ell as usize;
    let out_trunc = f.trunc() / l;
    let scalar = pow_mod_signed(ell, f.weight - 1, p);
    let b = (0..=out_trunc)
        .map(|n| {
            let mut v = a[n * l];
            if n % l == 0 {
                v = (v + scalar * a[n / l]) % p;
            }
            v
        })
        .collect();
    Ok(QExpansion {
        weight: f.weight,
        coeffs: Coefficients::ModP { p, a: b },
    })
}

/// `T_l(theta f) = l theta(T_l f)` through `q^N`. `f` must be known to
/// `q^{l N}`.
pub fn commutation_check(f: &QExpansion, ell: u64, n: usize) -> Result<bool> {
    commutation_check_with(f, ell, n, None)
}

/// As [`commutation_check`], labelling `theta f` with `theta_weight` instead
/// of `k + p + 1`.
pub fn commutation_check_with(
    f: &QExpansion,
    ell: u64,
    n: usize,
    theta_weight: Option<i64>,
) -> Result<bool> {
    let needed = n * ell as usize;
    let f = f.truncate(needed)?;
    let lhs = hecke_t(ell, &theta_with_weight(&f, theta_weight)?)?;
    let rhs = theta(&hecke_t(ell, &f)?)?.scale(ell as i64)?;
    Ok(lhs.coeffs_mod_p()[..=n] == rhs.coeffs_mod_p()[..=n])
}

fn in_span(rows: &[Vec<u64>], target: &[u64], p: u64) -> bool {
    // Row-reduce the spanning set, then reduce the target against it.
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for (piv, b) in &basis {
            let c = v[*piv];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + p - c * y % p) % p;
                }
            }
        }
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[piv], p);
            v.iter_mut().for_each(|x| *x = *x * inv % p);
            for (_, b) in basis.iter_mut() {
                let c = b[piv];
                if c != 0 {
                    for (x, y) in b.iter_mut().zip(&v) {
                        *x = (*x + p - c * y % p) % p;
                    }
                }
            }
            basis.push((piv, v));
        }
    }
    let mut t = target.to_vec();
    for (piv, b) in &basis {
        let c = t[*piv];
        if c != 0 {
            for (x, y) in t.iter_mut().zip(b) {
                *x = (*x + p - c * y % p) % p;
            }
        }
    }
    t.iter().all(|&x| x == 0)
}

/// Rank over `F_p` of the first `len` coefficients of the given series.
pub fn rank_mod_p(series: &[QExpansion], len: usize) -> Result<usize> {
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut p = 0;
    for s in series {
        let (q, a) = s.modp()?;
        p = q;
        if a.len() < len {
            return Err(Error::domain("truncation_sufficient", "series too short"));
        }
        rows.push(a[..len].to_vec());
    }
    let mut rank = 0;
    let mut col = 0;
    while rank < rows.len() && col < len {
        if let Some(r) = (rank..rows.len()).find(|&r| rows[r][col] != 0) {
            rows.swap(rank, r);
            let inv = inv_mod(rows[rank][col], p);
            let pivot: Vec<u64> = rows[rank].iter().map(|x| x * inv % p).collect();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[col] != 0 {
                    let c = row[col];
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x = (*x + p - c * y % p) % p;
                    }
                }
            }
            rows[rank] = pivot;
            rank += 1;
        }
        col += 1;
    }
    Ok(rank)
}

/// Weight filtration: the least `k' = k mod (p - 1)`, `0 <= k' <= k`, such
/// that `f` agrees with a weight-`k'` form through the weight-`k` Sturm
/// bound.
pub fn filtration(f: &QExpansion) -> Result<i64> {
    let (p, a) = f.modp()?;
    let k = f.weight;
    let s = sturm_bound(k);
    if f.trunc() < s {
        return Err(Error::domain(
            "truncation_sufficient",
            format!("weight {k} needs coefficients through q^{s}, have q^{}", f.trunc()),
        ));
    }
    let target = &a[..=s];
    let step = p as i64 - 1;
    let mut kp = k.rem_euclid(step);
    while kp <= k {
        let b = basis(kp, p, s)?;
        let rows: Vec<Vec<u64>> = b.iter().map(|g| g.coeffs_mod_p().to_vec()).collect();
        if in_span(&rows, target, p) {
            return Ok(kp);
        }
        kp += step;
    }
    Err(Error::Inconsistent(format!(
        "series is not a weight {k} form mod {p} through q^{s}"
    )))
}

/// Filtrations of `theta^i f` for `i = 1..=iterations`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaCycle {
    pub p: u64,
    pub filtrations: Vec<i64>,
    /// Smallest period of the sequence, which divides `p - 1`.
    pub period: Option<usize>,
    /// True when some `theta^i f` vanishes; the sequence is then empty.
    pub vanishes: bool,
}

pub fn theta_cycle(f: &QExpansion, iterations: usize) -> Result<ThetaCycle> {
    let (p, _) = f.modp()?;
    if iterations < p as usize {
        return Err(Error::domain(
            "iterations_at_least_p",
            format!("{iterations} iterations for p = {p}"),
        ));
    }
    let mut cur = f.clone();
    let mut iterates = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        cur = theta(&cur)?;
        if cur.is_zero() {
            return Ok(ThetaCycle {
                p,
                filtrations: Vec::new(),
                period: None,
                vanishes: true,
            });
        }
        iterates.push(cur.clone());
    }
    assert_eq!(
        iterates[p as usize - 1].coeffs,
        iterates[0].coeffs,
        "theta^p = theta on q-expansions"
    );
    let filtrations = iterates.iter().map(filtration).collect::<Result<Vec<_>>>()?;
    let len = filtrations.len();
    let period = (1..=len).find(|&d| (d..len).all(|i| filtrations[i] == filtrations[i - d]));
    if let Some(d) = period {
        if d < len {
            assert_eq!((p as usize - 1) % d, 0, "period divides p - 1");
        }
    }
    Ok(ThetaCycle {
        p,
        filtrations,
        period,
        vanishes: false,
    })
}

/// Per-prime outcome of [`eigen_twist_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllTwist {
    pub ell: u64,
    pub a_ell: u64,
    pub f_is_eigen: bool,
    pub theta_eigenvalue: u64,
    pub theta_is_eigen: bool,
    pub expected_theta_eigenvalue: u64,
    pub field_degree: usize,
    pub twist: Option<TwistReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenTwistReport {
    pub p: u64,
    pub theta_kills_f: bool,
    pub ells: Vec<EllTwist>,
}

impl EigenTwistReport {
    pub fn all_pass(&self) -> bool {
        !self.theta_kills_f
            && self.ells.iter().all(|e| {
                e.f_is_eigen
                    && e.theta_is_eigen
                    && e.theta_eigenvalue == e.expected_theta_eigenvalue
                    && e.twist.as_ref().is_some_and(TwistReport::all_pass)
            })
    }
}

fn eigenvalue_if_eigen(f: &QExpansion, tf: &QExpansion) -> (u64, bool) {
    let (p, a) = f.modp().expect("series over F_p");
    let b = tf.coeffs_mod_p();
    let lambda = b[1];
    let ok = (0..b.len()).all(|n| b[n] == lambda * a[n] % p);
    (lambda, ok)
}

fn gl2_eigensystem(ell: u64, a_ell: u64, k: i64, sqrt: &crate::field::Fe) -> EigenSystem {
    let field = sqrt.field();
    let mut values = std::collections::BTreeMap::new();
    values.insert(Weight::from(vec![1, 0]), field.from_u64(a_ell));
    let det = field.from_u64(ell).pow_i(k - 2).expect("l is a unit");
    values.insert(Weight::from(vec![1, 1]), det);
    EigenSystem {
        datum: "gl2".into(),
        q_value: ell as i64,
        sqrt_q: sqrt.clone(),
        values,
    }
}

/// Checks that `theta f` is a `T_l`-eigenform with eigenvalue `l a_l(f)` and
/// that the packaged `gl2` eigensystems of `f` and `theta f` differ by the
/// `det` twist with `q = l`.
pub fn eigen_twist_check(f: &QExpansion, ells: &[u64], n: usize) -> Result<EigenTwistReport> {
    let (p, a) = f.modp()?;
    let tf = theta(f)?;
    if tf.is_zero() {
        return Ok(EigenTwistReport {
            p,
            theta_kills_f: true,
            ells: Vec::new(),
        });
    }
    if a.len() < 2 || a[1] != 1 {
        return Err(Error::domain("normalized", "eigenform must have a_1 = 1"));
    }
    let gl2 = RootDatum::gl(2)?;
    let det = gl2.character("det")?;
    let mut out = Vec::new();
    for &ell in ells {
        let needed = n * ell as usize;
        let fl = f.truncate(needed)?;
        let tfl = tf.truncate(needed)?;
        let (a_ell, f_is_eigen) = eigenvalue_if_eigen(&fl.truncate(n)?, &hecke_t(ell, &fl)?);
        let (theta_eigenvalue, theta_is_eigen) =
            eigenvalue_if_eigen(&tfl.truncate(n)?, &hecke_t(ell, &tfl)?);
        let expected = ell % p * a_ell % p;
        let mut degree = 2;
        let twist = loop {
            let field = FiniteField::new(p, degree)?;
            let sqrt = field
                .from_u64(ell)
                .sqrt()
                .expect("every element of F_p is a square in F_{p^2}");
            let psi1 = gl2_eigensystem(ell, a_ell, f.weight, &sqrt);
            let psi2 = gl2_eigensystem(ell, theta_eigenvalue, tf.weight, &sqrt);
            let mut m = SatakeMatrices::new(&gl2);
            match check_twist_theorem(&mut m, &psi1, &psi2, &det, None) {
                Ok(r) => break Some(r),
                Err(Error::ExtendField { needed, .. }) if needed > degree => degree = needed,
                Err(Error::Inconsistent(_)) => break None,
                Err(e) => return Err(e),
            }
        };
        out.push(EllTwist {
            ell,
            a_ell,
            f_is_eigen,
            theta_eigenvalue,
            theta_is_eigen,
            expected_theta_eigenvalue: expected,
            field_degree: degree,
            twist,
        });
    }
    Ok(EigenTwistReport {
        p,
        theta_kills_f: false,
        ells: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_series() {
        let d = delta(10);
        assert_eq!(d.rational_coeff(0).unwrap(), &BigRational::zero());
        assert_eq!(d.rational_coeff(1).unwrap(), &BigRational::one());
        assert_eq!(d.rational_coeff(2).unwrap(), &BigRational::from_integer((-24).into()));
        assert_eq!(d.rational_coeff(3).unwrap(), &BigRational::from_integer(252.into()));
        let e4 = eisenstein4(20).reduce(5).unwrap();
        assert!(e4.coeffs_mod_p()[1..].iter().all(|&x| x == 0));
        assert_eq!(delta(30).reduce(7).unwrap(), delta_mod_p(7, 30).unwrap());
        assert_eq!(eisenstein6(30).reduce(11).unwrap(), eisenstein6_mod(11, 30).unwrap());
        assert!(delta_mod_p(3, 10).is_err());
    }

    #[test]
    fn dimensions_and_basis() {
        assert_eq!(dim_mk(12), 2);
        assert_eq!(dim_mk(2), 0);
        assert_eq!(dim_mk(14), 1);
        assert_eq!(dim_mk(0), 1);
        assert_eq!(dim_mk(7), 0);
        let b = basis(12, 5, 10).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[1], delta_mod_p(5, 10).unwrap());
        let e4 = eisenstein4_mod(5, 10).unwrap();
        assert_eq!(b[0], e4.mul(&e4).unwrap().mul(&e4).unwrap());
        for p in [5u64, 7, 11, 13] {
            for k in (0..=60).step_by(2) {
                let b = basis(k, p, sturm_bound(k)).unwrap();
                assert_eq!(b.len(), dim_mk(k));
                assert_eq!(rank_mod_p(&b, sturm_bound(k)).unwrap(), dim_mk(k));
            }
        }
    }

    #[test]
    fn theta_examples() {
        let q = QExpansion::mod_p(5, 0, &[0, 1, 0, 0]).unwrap();
        assert_eq!(theta(&q).unwrap().coeffs_mod_p(), &[0, 1, 0, 0]);
        let h = hasse(5, 10).unwrap();
        assert_eq!(h.weight, 4);
        assert!(theta(&h).unwrap().is_zero());
        assert_eq!(hasse(7, 3).unwrap().weight, 6);
        let td = theta(&delta_mod_p(5, 10).unwrap()).unwrap();
        assert_eq!(td.coeffs_mod_p()[2], 2);
        assert_eq!(td.weight, 18);
        assert!(theta(&delta(5)).is_err());
    }

    #[test]
    fn hecke_examples() {
        let d5 = delta_mod_p(5, 40).unwrap();
        let t2 = hecke_t(2, &d5).unwrap();
        assert_eq!(t2.trunc(), 20);
        assert_eq!(t2, d5.truncate(20).unwrap());
        let d7 = delta_mod_p(7, 30).unwrap();
        assert!(hecke_t(3, &d7).unwrap().is_zero());
        let zero = QExpansion::mod_p(5, 12, &[0; 20]).unwrap();
        assert!(hecke_t(3, &zero).unwrap().is_zero());
        assert!(hecke_t(5, &d5).is_err());
    }

    #[test]
    fn commutation_examples() {
        let d5 = delta_mod_p(5, 100).unwrap();
        assert!(commutation_check(&d5, 2, 50).unwrap());
        let e6 = eisenstein6_mod(5, 150).unwrap();
        assert!(commutation_check(&e6, 3, 50).unwrap());
        assert!(!commutation_check_with(&d5, 2, 50, Some(12)).unwrap());
        assert!(commutation_check(&d5, 3, 50).is_err());
    }

    #[test]
    fn filtration_examples() {
        assert_eq!(filtration(&hasse(5, 10).unwrap()).unwrap(), 0);
        let d5 = delta_mod_p(5, 20).unwrap();
        assert_eq!(filtration(&d5).unwrap(), 12);
        let w = filtration(&theta(&d5).unwrap()).unwrap();
        assert!(w <= 18 && w % 4 == 14 % 4);
        let dh = d5.mul(&hasse(5, 20).unwrap()).unwrap();
        assert_eq!(dh.weight, 16);
        assert_eq!(filtration(&dh).unwrap(), 12);
        assert!(filtration(&delta_mod_p(5, 0).unwrap()).is_err());
        let junk = QExpansion::mod_p(5, 12, &[0, 1, 3, 1, 1]).unwrap();
        assert!(matches!(filtration(&junk), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn theta_cycle_properties() {
        let d5 = delta_mod_p(5, 60).unwrap();
        let c = theta_cycle(&d5, 6).unwrap();
        assert_eq!(c.filtrations.len(), 6);
        assert!(c.period.is_some_and(|d| 4 % d == 0));
        let one = QExpansion::mod_p(5, 0, &[1, 0, 0]).unwrap();
        let c = theta_cycle(&one, 5).unwrap();
        assert!(c.vanishes && c.filtrations.is_empty());
        assert!(theta_cycle(&d5, 3).is_err());
    }

    #[test]
    fn eigen_twist_examples() {
        let d5 = delta_mod_p(5, 100).unwrap();
        let r = eigen_twist_check(&d5, &[2, 3], 20).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.ells[0].theta_eigenvalue, 2);
        assert!(eigen_twist_check(&d5.scale(2).unwrap(), &[2], 20).is_err());
        let killed = QExpansion::mod_p(5, 12, &[0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 3]).unwrap();
        assert!(eigen_twist_check(&killed, &[2], 5).unwrap().theta_kills_f);
    }

    #[test]
    fn json_round_trip() {
        let d = delta(3);
        let doc = d.to_doc();
        assert_eq!(
            serde_json::to_string(&doc).unwrap(),
            r#"{"ring":"Q","weight":12,"coeffs":["0","1","-24","252"],"trunc":3}"#
        );
        assert_eq!(QExpansion::from_doc(&doc).unwrap(), d);
        let m = d.reduce(5).unwrap();
        let doc = m.to_doc();
        assert_eq!(doc.p, Some(5));
        assert_eq!(QExpansion::from_doc(&doc).unwrap(), m);
    }
}

//! Root data of split reductive groups.
//!
//! A [`RootDatum`] carries the character lattice, the cocharacter lattice (both
//! as `Z^rank` in fixed coordinates), the simple roots and the simple coroots.
//! Everything downstream (dual-group characters, Satake matrices, Weyl orbits)
//! works with cocharacters of `G`, which are the weights of the dual group.
//!
//! Coordinates of the built-in data:
//!
//! * `gl(n)`: rank `n`, roots and coroots `e_i - e_{i+1}`, character `det = (1,..,1)`.
//! * `gsp(2n)`: rank `n + 1`, coordinates `(e_0; e_1..e_n)` where `e_0` is dual to
//!   the similitude. Simple roots `e_i - e_{i+1}` for `1 <= i < n` and
//!   `2 e_n - e_0`; simple coroots `e_i - e_{i+1}` and `e_n`. The similitude
//!   character is `nu = e_0`.
//!
//! The half-sum of positive roots `rho` is half-integral in general, so only
//! `2<rho, mu>` is ever exposed.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the size of an enumerated Weyl group.
pub const MAX_WEYL_ORDER: usize = 200_000;

/// An element of the cocharacter lattice `X_*(T)`, equivalently a weight of the
/// dual torus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cocharacter {
    pub coords: Vec<i64>,
}

pub type Weight = Cocharacter;

impl Cocharacter {
    pub fn new(coords: Vec<i64>) -> Self {
        Cocharacter { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Cocharacter {
            coords: vec![0; rank],
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Cocharacter) -> Cocharacter {
        Cocharacter::new(add_vec(&self.coords, &other.coords))
    }

    pub fn sub(&self, other: &Cocharacter) -> Cocharacter {
        Cocharacter::new(sub_vec(&self.coords, &other.coords))
    }

    pub fn scale(&self, k: i64) -> Cocharacter {
        Cocharacter::new(self.coords.iter().map(|c| c * k).collect())
    }
}

impl From<Vec<i64>> for Cocharacter {
    fn from(coords: Vec<i64>) -> Self {
        Cocharacter { coords }
    }
}

impl From<&[i64]> for Cocharacter {
    fn from(coords: &[i64]) -> Self {
        Cocharacter {
            coords: coords.to_vec(),
        }
    }
}

impl fmt::Display for Cocharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A character of `T` that extends to `G`; it pairs to zero with every coroot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharacterOfG {
    pub name: String,
    pub coords: Vec<i64>,
}

impl CharacterOfG {
    /// `eta^k`, coordinates scaled by `k`.
    pub fn power(&self, k: i64) -> CharacterOfG {
        CharacterOfG {
            name: if k == 1 {
                self.name.clone()
            } else {
                format!("{}^{}", self.name, k)
            },
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn sub_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

type Matrix = Vec<Vec<i64>>;

fn mat_vec(m: &Matrix, v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0; cols]; n];
    for i in 0..n {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// The finite Weyl group, realized as integer matrices acting on cocharacter
/// coordinates.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub generators: Vec<Matrix>,
    pub elements: Vec<WeylElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: Matrix,
    /// `(-1)^length`.
    pub sign: i64,
}

impl WeylElement {
    pub fn apply(&self, mu: &Cocharacter) -> Cocharacter {
        Cocharacter::new(mat_vec(&self.matrix, &mu.coords))
    }
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Solver for `x = sum n_i alpha_i^vee` with linearly independent coroots.
#[derive(Clone, Debug)]
struct CorootSolver {
    pivots: Vec<usize>,
    /// Inverse of the square submatrix formed by the pivot rows.
    inverse: Vec<Vec<Ratio<i64>>>,
}

impl CorootSolver {
    /// `columns[j]` is the j-th coroot, a vector of length `rank`.
    fn new(rank: usize, columns: &[Vec<i64>]) -> Result<Self> {
        let s = columns.len();
        // Row-reduce the transpose to find a set of independent coordinate rows.
        let rows: Vec<Vec<Ratio<i64>>> = (0..rank)
            .map(|r| columns.iter().map(|c| Ratio::from_integer(c[r])).collect())
            .collect();
        let mut pivots = Vec::with_capacity(s);
        let mut basis: Vec<Vec<Ratio<i64>>> = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            let mut v = row.clone();
            for (b, &col) in basis.iter().zip(pivot_cols(&basis).iter()) {
                let f = v[col];
                if f != Ratio::from_integer(0) {
                    for j in 0..s {
                        v[j] -= f * b[j];
                    }
                }
            }
            if let Some(col) = v.iter().position(|x| *x != Ratio::from_integer(0)) {
                let lead = v[col];
                for x in v.iter_mut() {
                    *x /= lead;
                }
                for b in basis.iter_mut() {
                    let f = b[col];
                    if f != Ratio::from_integer(0) {
                        for j in 0..s {
                            b[j] -= f * v[j];
                        }
                    }
                }
                basis.push(v);
                pivots.push(r);
                if pivots.len() == s {
                    break;
                }
            }
        }
        if pivots.len() < s {
            return Err(Error::domain(
                "coroots_independent",
                format!("simple coroots span a lattice of rank {} < {s}", pivots.len()),
            ));
        }
        let square: Vec<Vec<Ratio<i64>>> = pivots
            .iter()
            .map(|&r| columns.iter().map(|c| Ratio::from_integer(c[r])).collect())
            .collect();
        let inverse = invert_rational(square).ok_or_else(|| {
            Error::domain("coroots_independent", "pivot submatrix is singular")
        })?;
        Ok(CorootSolver { pivots, inverse })
    }

    /// Integer coordinates of `x` in the coroot basis, if `x` lies in the
    /// coroot lattice.
    fn solve(&self, columns: &[Vec<i64>], x: &[i64]) -> Option<Vec<i64>> {
        let s = columns.len();
        let mut out = Vec::with_capacity(s);
        for i in 0..s {
            let mut acc = Ratio::from_integer(0);
            for (j, &r) in self.pivots.iter().enumerate() {
                acc += self.inverse[i][j] * Ratio::from_integer(x[r]);
            }
            if !acc.is_integer() {
                return None;
            }
            out.push(acc.to_integer());
        }
        let rank = x.len();
        for r in 0..rank {
            let v: i64 = (0..s).map(|j| out[j] * columns[j][r]).sum();
            if v != x[r] {
                return None;
            }
        }
        Some(out)
    }
}

fn pivot_cols(basis: &[Vec<Ratio<i64>>]) -> Vec<usize> {
    basis
        .iter()
        .map(|b| {
            b.iter()
                .position(|x| *x != Ratio::from_integer(0))
                .unwrap_or(0)
        })
        .collect()
}

fn invert_rational(mut m: Vec<Vec<Ratio<i64>>>) -> Option<Vec<Vec<Ratio<i64>>>> {
    let n = m.len();
    let zero = Ratio::from_integer(0);
    let mut inv: Vec<Vec<Ratio<i64>>> = (0..n)
        .map(|i| (0..n).map(|j| Ratio::from_integer(i64::from(i == j))).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != zero)?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let lead = m[col][col];
        for j in 0..n {
            m[col][j] /= lead;
            inv[col][j] /= lead;
        }
        for r in 0..n {
            if r != col && m[r][col] != zero {
                let f = m[r][col];
                for j in 0..n {
                    m[r][j] = m[r][j] - f * m[col][j];
                    inv[r][j] = inv[r][j] - f * inv[col][j];
                }
            }
        }
    }
    Some(inv)
}

/// JSON document form of a root datum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootDatumDoc {
    pub name: String,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    #[serde(default)]
    pub characters: BTreeMap<String, Vec<i64>>,
}

/// A root datum `(X^*, Delta^*, X_*, Delta_*)` with derived data.
#[derive(Clone, Debug)]
pub struct RootDatum {
    name: String,
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    characters: BTreeMap<String, Vec<i64>>,
    solver: CorootSolver,
    positive_roots: Vec<Vec<i64>>,
    positive_coroots: Vec<Vec<i64>>,
    two_rho: Vec<i64>,
    two_rho_check: Vec<i64>,
    key: String,
    weyl: OnceLock<std::result::Result<WeylGroup, Error>>,
    form: OnceLock<std::result::Result<Matrix, Error>>,
}

impl RootDatum {
    pub fn new(
        name: impl Into<String>,
        rank: usize,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
        characters: BTreeMap<String, Vec<i64>>,
    ) -> Result<Self> {
        let name = name.into();
        if rank == 0 {
            return Err(Error::domain("rank_positive", "rank must be at least 1"));
        }
        if simple_roots.len() != simple_coroots.len() {
            return Err(Error::domain(
                "equal_simple_counts",
                format!(
                    "{} simple roots but {} simple coroots",
                    simple_roots.len(),
                    simple_coroots.len()
                ),
            ));
        }
        if simple_roots.len() > rank {
            return Err(Error::domain(
                "semisimple_rank_bound",
                format!("{} simple roots exceed rank {rank}", simple_roots.len()),
            ));
        }
        for v in simple_roots.iter().chain(&simple_coroots) {
            if v.len() != rank {
                return Err(Error::Dimension {
                    expected: rank,
                    got: v.len(),
                });
            }
        }
        for (i, a) in simple_roots.iter().enumerate() {
            for (j, c) in simple_coroots.iter().enumerate() {
                let v = dot(a, c);
                if i == j && v != 2 {
                    return Err(Error::domain(
                        "cartan_diagonal",
                        format!("<alpha_{i}, alpha_{i}^vee> = {v}, expected 2"),
                    ));
                }
                if i != j && v > 0 {
                    return Err(Error::domain(
                        "cartan_off_diagonal",
                        format!("<alpha_{i}, alpha_{j}^vee> = {v} is positive"),
                    ));
                }
            }
        }
        for (cname, c) in &characters {
            if c.len() != rank {
                return Err(Error::Dimension {
                    expected: rank,
                    got: c.len(),
                });
            }
            for (j, co) in simple_coroots.iter().enumerate() {
                if dot(c, co) != 0 {
                    return Err(Error::domain(
                        "character_kills_coroots",
                        format!("character `{cname}` pairs nontrivially with coroot {j}"),
                    ));
                }
            }
        }
        let solver = CorootSolver::new(rank, &simple_coroots)?;
        let (positive_roots, positive_coroots) =
            positive_system(&simple_roots, &simple_coroots, &solver)?;
        let mut two_rho = vec![0; rank];
        for r in &positive_roots {
            two_rho = add_vec(&two_rho, r);
        }
        let mut two_rho_check = vec![0; rank];
        for c in &positive_coroots {
            two_rho_check = add_vec(&two_rho_check, c);
        }
        let doc = RootDatumDoc {
            name: name.clone(),
            rank,
            simple_roots: simple_roots.clone(),
            simple_coroots: simple_coroots.clone(),
            characters: characters.clone(),
        };
        let key = serde_json::to_string(&doc).expect("root datum serializes");
        Ok(RootDatum {
            name,
            rank,
            simple_roots,
            simple_coroots,
            characters,
            solver,
            positive_roots,
            positive_coroots,
            two_rho,
            two_rho_check,
            key,
            weyl: OnceLock::new(),
            form: OnceLock::new(),
        })
    }

    /// `GL_n`.
    pub fn gl(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("n_positive", "gl(n) needs n >= 1"));
        }
        let mut roots = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let mut v = vec![0; n];
            v[i] = 1;
            v[i + 1] = -1;
            roots.push(v);
        }
        let mut chars = BTreeMap::new();
        chars.insert("det".to_string(), vec![1; n]);
        RootDatum::new(format!("gl{n}"), n, roots.clone(), roots, chars)
    }

    /// `GSp_{2n}` in the coordinates described in the module docs.
    /// `two_n` is the size of the matrices, so `gsp(4)` is `GSp_4`.
    pub fn gsp(two_n: usize) -> Result<Self> {
        if two_n == 0 || two_n % 2 != 0 {
            return Err(Error::domain(
                "n_positive",
                format!("gsp(2n) needs a positive even size, got {two_n}"),
            ));
        }
        let n = two_n / 2;
        let rank = n + 1;
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for i in 1..n {
            let mut v = vec![0; rank];
            v[i] = 1;
            v[i + 1] = -1;
            roots.push(v.clone());
            coroots.push(v);
        }
        let mut long = vec![0; rank];
        long[n] = 2;
        long[0] = -1;
        roots.push(long);
        let mut short = vec![0; rank];
        short[n] = 1;
        coroots.push(short);
        let mut chars = BTreeMap::new();
        let mut nu = vec![0; rank];
        nu[0] = 1;
        chars.insert("nu".to_string(), nu);
        RootDatum::new(format!("gsp{two_n}"), rank, roots, coroots, chars)
    }

    /// Direct product; characters are renamed `<name>_1`, `<name>_2`.
    pub fn product(a: &RootDatum, b: &RootDatum) -> Result<Self> {
        let rank = a.rank + b.rank;
        let pad_left = |v: &Vec<i64>| {
            let mut out = v.clone();
            out.extend(std::iter::repeat(0).take(b.rank));
            out
        };
        let pad_right = |v: &Vec<i64>| {
            let mut out = vec![0; a.rank];
            out.extend_from_slice(v);
            out
        };
        let mut roots: Vec<Vec<i64>> = a.simple_roots.iter().map(pad_left).collect();
        roots.extend(b.simple_roots.iter().map(pad_right));
        let mut coroots: Vec<Vec<i64>> = a.simple_coroots.iter().map(pad_left).collect();
        coroots.extend(b.simple_coroots.iter().map(pad_right));
        let mut chars = BTreeMap::new();
        for (k, v) in &a.characters {
            chars.insert(format!("{k}_1"), pad_left(v));
        }
        for (k, v) in &b.characters {
            chars.insert(format!("{k}_2"), pad_right(v));
        }
        RootDatum::new(format!("{}x{}", a.name, b.name), rank, roots, coroots, chars)
    }

    pub fn from_doc(doc: RootDatumDoc) -> Result<Self> {
        RootDatum::new(
            doc.name,
            doc.rank,
            doc.simple_roots,
            doc.simple_coroots,
            doc.characters,
        )
    }

    pub fn from_json(document: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(document)
            .map_err(|e| Error::parse("<document>", e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::parse("<document>", "expected a JSON object"))?;
        for field in ["name", "rank", "simple_roots", "simple_coroots"] {
            if !obj.contains_key(field) {
                return Err(Error::parse(field, "missing"));
            }
        }
        let doc: RootDatumDoc = serde_json::from_value(value.clone()).map_err(|e| {
            // Point at the first field that fails to decode on its own.
            let field = ["name", "rank", "simple_roots", "simple_coroots", "characters"]
                .into_iter()
                .find(|f| match (*f, obj.get(*f)) {
                    ("name", Some(v)) => !v.is_string(),
                    ("rank", Some(v)) => !v.is_u64(),
                    ("characters", Some(v)) => {
                        serde_json::from_value::<BTreeMap<String, Vec<i64>>>(v.clone()).is_err()
                    }
                    (_, Some(v)) => serde_json::from_value::<Vec<Vec<i64>>>(v.clone()).is_err(),
                    _ => false,
                })
                .unwrap_or("<document>");
            Error::parse(field, e.to_string())
        })?;
        RootDatum::from_doc(doc)
    }

    /// Parses a built-in name: `gl<n>`, `gsp<2n>`, or products joined with `x`.
    pub fn builtin(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.split('x').collect();
        let mut acc: Option<RootDatum> = None;
        for part in parts {
            let factor = if let Some(n) = part.strip_prefix("gsp") {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::parse("datum", format!("bad size in `{part}`")))?;
                RootDatum::gsp(n)?
            } else if let Some(n) = part.strip_prefix("gl") {
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::parse("datum", format!("bad size in `{part}`")))?;
                RootDatum::gl(n)?
            } else {
                return Err(Error::parse("datum", format!("unknown datum `{part}`")));
            };
            acc = Some(match acc {
                None => factor,
                Some(a) => RootDatum::product(&a, &factor)?,
            });
        }
        acc.ok_or_else(|| Error::parse("datum", "empty name"))
    }

    pub fn to_doc(&self) -> RootDatumDoc {
        RootDatumDoc {
            name: self.name.clone(),
            rank: self.rank,
            simple_roots: self.simple_roots.clone(),
            simple_coroots: self.simple_coroots.clone(),
            characters: self.characters.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.simple_coroots
    }

    /// Positive roots of `G` (characters).
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    /// Positive coroots of `G`, i.e. positive roots of the dual group.
    pub fn positive_coroots(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    /// Twice the half-sum of positive roots (a character).
    pub fn two_rho(&self) -> &[i64] {
        &self.two_rho
    }

    /// Twice the half-sum of positive coroots (a cocharacter).
    pub fn two_rho_check(&self) -> &[i64] {
        &self.two_rho_check
    }

    /// Canonical JSON, used as a cache key.
    pub fn canonical_key(&self) -> &str {
        &self.key
    }

    pub fn characters(&self) -> impl Iterator<Item = CharacterOfG> + '_ {
        self.characters.iter().map(|(k, v)| CharacterOfG {
            name: k.clone(),
            coords: v.clone(),
        })
    }

    pub fn character(&self, name: &str) -> Result<CharacterOfG> {
        self.characters
            .get(name)
            .map(|v| CharacterOfG {
                name: name.to_string(),
                coords: v.clone(),
            })
            .ok_or_else(|| {
                Error::domain(
                    "known_character",
                    format!("datum {} has no character `{name}`", self.name),
                )
            })
    }

    /// Validates an arbitrary vector as a character of `G`.
    pub fn character_from_coords(&self, name: &str, coords: Vec<i64>) -> Result<CharacterOfG> {
        self.check_len(coords.len())?;
        for (j, co) in self.simple_coroots.iter().enumerate() {
            if dot(&coords, co) != 0 {
                return Err(Error::domain(
                    "character_kills_coroots",
                    format!("{coords:?} pairs nontrivially with coroot {j}"),
                ));
            }
        }
        Ok(CharacterOfG {
            name: name.to_string(),
            coords,
        })
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.rank {
            Err(Error::Dimension {
                expected: self.rank,
                got,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_weight(&self, mu: &Cocharacter) -> Result<()> {
        self.check_len(mu.len())
    }

    /// `<chi, mu>`.
    pub fn pairing(&self, chi: &[i64], mu: &Cocharacter) -> Result<i64> {
        if chi.len() != mu.len() {
            return Err(Error::Dimension {
                expected: chi.len(),
                got: mu.len(),
            });
        }
        Ok(dot(chi, &mu.coords))
    }

    pub fn is_dominant(&self, mu: &Cocharacter) -> Result<bool> {
        self.check_weight(mu)?;
        Ok(self.simple_roots.iter().all(|a| dot(a, &mu.coords) >= 0))
    }

    fn require_dominant(&self, mu: &Cocharacter) -> Result<()> {
        if !self.is_dominant(mu)? {
            return Err(Error::domain(
                "dominant",
                format!("{mu} is not dominant for {}", self.name),
            ));
        }
        Ok(())
    }

    /// Coordinates of `x` in the simple coroot basis, if `x` is in the coroot
    /// lattice.
    pub fn coroot_coordinates(&self, x: &[i64]) -> Option<Vec<i64>> {
        if self.simple_coroots.is_empty() {
            return if x.iter().all(|&c| c == 0) {
                Some(Vec::new())
            } else {
                None
            };
        }
        self.solver.solve(&self.simple_coroots, x)
    }

    /// Dominance order on dominant weights: `mu <= lambda`.
    pub fn leq(&self, mu: &Cocharacter, lambda: &Cocharacter) -> Result<bool> {
        self.require_dominant(mu)?;
        self.require_dominant(lambda)?;
        Ok(self.leq_unchecked(mu, lambda))
    }

    /// Dominance test without the dominance precondition: is `lambda - mu` a
    /// nonnegative integer combination of simple coroots?
    pub(crate) fn leq_unchecked(&self, mu: &Cocharacter, lambda: &Cocharacter) -> bool {
        let diff = sub_vec(&lambda.coords, &mu.coords);
        match self.coroot_coordinates(&diff) {
            Some(n) => n.iter().all(|&c| c >= 0),
            None => false,
        }
    }

    /// `2 <rho, mu>`, always an integer.
    pub fn rho_pairing_doubled(&self, mu: &Cocharacter) -> i64 {
        dot(&self.two_rho, &mu.coords)
    }

    /// Simple reflection `s_i(mu) = mu - <alpha_i, mu> alpha_i^vee`.
    pub fn reflect(&self, i: usize, mu: &Cocharacter) -> Cocharacter {
        let a = dot(&self.simple_roots[i], &mu.coords);
        Cocharacter::new(
            mu.coords
                .iter()
                .zip(&self.simple_coroots[i])
                .map(|(m, c)| m - a * c)
                .collect(),
        )
    }

    /// The unique dominant element of the Weyl orbit of `mu`.
    pub fn dominant_representative(&self, mu: &Cocharacter) -> Cocharacter {
        let mut cur = mu.clone();
        loop {
            let bad = self
                .simple_roots
                .iter()
                .position(|a| dot(a, &cur.coords) < 0);
            match bad {
                Some(i) => cur = self.reflect(i, &cur),
                None => return cur,
            }
        }
    }

    pub fn weyl_orbit(&self, mu: &Cocharacter) -> BTreeSet<Cocharacter> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(mu.clone());
        queue.push_back(mu.clone());
        while let Some(cur) = queue.pop_front() {
            for i in 0..self.simple_roots.len() {
                let next = self.reflect(i, &cur);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    /// Sorts weights by decreasing `2<rho, .>`, ties broken by decreasing
    /// coordinates. This is a linear extension of the dominance order with the
    /// largest weights first.
    pub fn sort_graded(&self, weights: &mut [Cocharacter]) {
        weights.sort_by(|a, b| {
            self.rho_pairing_doubled(b)
                .cmp(&self.rho_pairing_doubled(a))
                .then_with(|| b.cmp(a))
        });
    }

    /// All dominant `mu <= lambda`, in graded order starting with `lambda`.
    pub fn dominant_weights_below(&self, lambda: &Cocharacter) -> Result<Vec<Cocharacter>> {
        self.require_dominant(lambda)?;
        // Dominant weights below lambda are connected to lambda through chains
        // of dominant weights differing by positive coroots.
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lambda.clone());
        queue.push_back(lambda.clone());
        while let Some(cur) = queue.pop_front() {
            for c in &self.positive_coroots {
                let next = Cocharacter::new(sub_vec(&cur.coords, c));
                if self.simple_roots.iter().all(|a| dot(a, &next.coords) >= 0)
                    && seen.insert(next.clone())
                {
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<Cocharacter> = seen.into_iter().collect();
        self.sort_graded(&mut out);
        Ok(out)
    }

    pub fn weyl_group(&self) -> Result<&WeylGroup> {
        self.weyl
            .get_or_init(|| self.generate_weyl_group())
            .as_ref()
            .map_err(|e| e.clone())
    }

    fn generate_weyl_group(&self) -> std::result::Result<WeylGroup, Error> {
        let n = self.rank;
        let generators: Vec<Matrix> = self
            .simple_roots
            .iter()
            .zip(&self.simple_coroots)
            .map(|(a, c)| {
                (0..n)
                    .map(|r| (0..n).map(|col| i64::from(r == col) - c[r] * a[col]).collect())
                    .collect()
            })
            .collect();
        let mut index: HashMap<Matrix, usize> = HashMap::new();
        let mut elements = vec![WeylElement {
            matrix: identity(n),
            sign: 1,
        }];
        index.insert(identity(n), 0);
        let mut head = 0;
        while head < elements.len() {
            let cur = elements[head].clone();
            head += 1;
            for g in &generators {
                let m = mat_mul(g, &cur.matrix);
                if !index.contains_key(&m) {
                    if elements.len() >= MAX_WEYL_ORDER {
                        return Err(Error::resource(
                            "max_weyl_order",
                            format!("Weyl group of {} exceeds {MAX_WEYL_ORDER}", self.name),
                        ));
                    }
                    index.insert(m.clone(), elements.len());
                    elements.push(WeylElement {
                        matrix: m,
                        sign: -cur.sign,
                    });
                }
            }
        }
        Ok(WeylGroup {
            generators,
            elements,
        })
    }

    /// A positive definite W-invariant integer form on the cocharacter space
    /// (the W-average of the standard dot product, unnormalized).
    pub fn invariant_form(&self) -> Result<&Matrix> {
        self.form
            .get_or_init(|| {
                let w = self.weyl_group().map_err(|e| e.clone())?;
                let n = self.rank;
                let mut b = vec![vec![0i64; n]; n];
                for el in &w.elements {
                    let m = &el.matrix;
                    for i in 0..n {
                        for j in 0..n {
                            let mut acc = 0;
                            for r in 0..n {
                                acc += m[r][i] * m[r][j];
                            }
                            b[i][j] += acc;
                        }
                    }
                }
                Ok(b)
            })
            .as_ref()
            .map_err(|e| e.clone())
    }
}

impl PartialEq for RootDatum {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for RootDatum {}

/// Positive roots and coroots, generated as W-orbits of the simple ones with
/// the root/coroot correspondence carried along.
fn positive_system(
    roots: &[Vec<i64>],
    coroots: &[Vec<i64>],
    solver: &CorootSolver,
) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let mut seen: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for (a, c) in roots.iter().zip(coroots) {
        if seen.insert(c.clone(), a.clone()).is_none() {
            queue.push_back((a.clone(), c.clone()));
        }
    }
    while let Some((a, c)) = queue.pop_front() {
        for (sa, sc) in roots.iter().zip(coroots) {
            let k = dot(&a, sc);
            let a2: Vec<i64> = a.iter().zip(sa).map(|(x, y)| x - k * y).collect();
            let m = dot(sa, &c);
            let c2: Vec<i64> = c.iter().zip(sc).map(|(x, y)| x - m * y).collect();
            if !seen.contains_key(&c2) {
                if seen.len() >= MAX_WEYL_ORDER {
                    return Err(Error::resource(
                        "max_root_count",
                        "root system generation did not close",
                    ));
                }
                seen.insert(c2.clone(), a2.clone());
                queue.push_back((a2, c2));
            }
        }
    }
    let mut pos_roots = Vec::new();
    let mut pos_coroots = Vec::new();
    for (c, a) in seen {
        let coords = solver
            .solve(coroots, &c)
            .expect("coroots lie in the coroot lattice");
        if coords.iter().all(|&x| x >= 0) {
            pos_coroots.push(c);
            pos_roots.push(a);
        }
    }
    Ok((pos_roots, pos_coroots))
}

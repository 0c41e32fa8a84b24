//! Subcommand handlers. Each returns the JSON value printed on success.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use hecke_core::acceptance;
use hecke_core::automorphic_weights::{
    constituents, depth, is_admissible_characterized, is_constituent_depth_e, is_sum_symmetric,
    weight_shift, AutWeight, Case, PowerMode, SignatureData,
};
use hecke_core::error::Error;
use hecke_core::field::{Fe, FiniteField};
use hecke_core::galois_twist::{
    char_value, check_twist_theorem, eigensystem_from_point, point_from_eigensystem, point_orbit,
    twist_point, EigenSystem, EigenSystemDoc, KnownPoints, TorusPoint, TorusPointDoc,
};
use hecke_core::modp_forms::{
    basis, commutation_check, delta_mod_p, eigen_twist_check, eisenstein4_mod, eisenstein6_mod,
    filtration, hasse, hecke_t, sturm_bound, theta, theta_cycle, QExpansion, QExpansionDoc,
};
use hecke_core::rep_ring::{
    dimension, multiply, sym_power, tensor_power, weight_multiplicities, VirtualCharacter,
};
use hecke_core::root_data::{RootDatum, Weight};
use hecke_core::satake::{
    character_doc, character_from_doc, lusztig_q_analog, HeckeElement, HeckeElementDoc,
    LaurentCharacterDoc, LaurentCombination, SatakeMatrices,
};

use crate::args::{
    AdmCommand, Command, FormArgs, HeckeMulArgs, KlArgs, MfCommand, Mode, ParamCommand, PointArgs,
    SignatureArgs, TensorArgs, TransformArgs,
};
use crate::error::{CliError, EXIT_SELFTEST_FAILED};
use crate::settings::Settings;

type Out = Result<Value, CliError>;

/// Result of a command: the JSON value and the exit code to use.
pub struct Outcome {
    pub value: Value,
    pub exit_code: i32,
}

pub fn run(command: &Command, s: &Settings) -> Result<Outcome, CliError> {
    let value = match command {
        Command::Rootdatum => rootdatum(s),
        Command::Weights(a) => weights(s, &a.weight),
        Command::Mult(a) => mult(s, &a.weight),
        Command::Tensor(a) => tensor(s, a),
        Command::Satake(a) => satake(s, a),
        Command::SatakeInv(a) => satake_inv(s, a),
        Command::HeckeMul(a) => hecke_mul(s, a),
        Command::KlPoly(a) => kl_poly(s, a),
        Command::Param(c) => param(s, c),
        Command::Adm(c) => adm(s, c),
        Command::Mf(c) => mf(s, c),
        Command::Selftest(a) => return selftest(s, a.criterion),
    }?;
    Ok(Outcome {
        value,
        exit_code: 0,
    })
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("documents serialize")
}

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(what, e.to_string()).into())
}

fn load_datum(s: &Settings) -> Result<RootDatum, CliError> {
    let name = s.require_datum()?;
    if name.ends_with(".json") || Path::new(name).is_file() {
        let text = std::fs::read_to_string(name).map_err(|e| CliError::io(format!("{name}: {e}")))?;
        Ok(RootDatum::from_json(&text)?)
    } else {
        Ok(RootDatum::builtin(name)?)
    }
}

fn parse_ints(field: &str, text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::parse(field, format!("`{x}` is not an integer")).into())
        })
        .collect()
}

fn weight(datum: &RootDatum, field: &str, text: &str) -> Result<Weight, CliError> {
    let w = Weight::new(parse_ints(field, text)?);
    datum.check_weight(&w)?;
    Ok(w)
}

fn dominant(datum: &RootDatum, field: &str, text: &str) -> Result<Weight, CliError> {
    let w = weight(datum, field, text)?;
    if !datum.is_dominant(&w)? {
        return Err(Error::domain("dominant", format!("{field} {w} is not dominant")).into());
    }
    Ok(w)
}

fn weight_list(datum: &RootDatum, field: &str, text: &str) -> Result<Vec<Weight>, CliError> {
    text.split(';').map(|t| dominant(datum, field, t)).collect()
}

fn rootdatum(s: &Settings) -> Out {
    let d = load_datum(s)?;
    let weyl_order = d.weyl_group().map(|w| w.elements.len()).ok();
    Ok(json!({
        "datum": to_value(&d.to_doc()),
        "positive_roots": d.positive_roots(),
        "positive_coroots": d.positive_coroots(),
        "two_rho": d.two_rho(),
        "two_rho_check": d.two_rho_check(),
        "weyl_order": weyl_order,
    }))
}

fn weights(s: &Settings, text: &str) -> Out {
    let d = load_datum(s)?;
    let l = dominant(&d, "weight", text)?;
    let below: Vec<Value> = d
        .dominant_weights_below(&l)?
        .into_iter()
        .map(|mu| json!({"weight": mu.coords, "two_rho_pairing": d.rho_pairing_doubled(&mu)}))
        .collect();
    Ok(json!({"datum": d.name(), "lambda": l.coords, "below": below}))
}

fn mult(s: &Settings, text: &str) -> Out {
    let d = load_datum(s)?;
    let l = dominant(&d, "weight", text)?;
    let table = weight_multiplicities(&d, &l)?;
    let mut keys: Vec<Weight> = table.mults.keys().cloned().collect();
    d.sort_graded(&mut keys);
    let rows: Vec<Value> = keys
        .iter()
        .map(|mu| {
            json!({
                "weight": mu.coords,
                "mult": table.mult(mu),
                "orbit_size": d.weyl_orbit(mu).len(),
            })
        })
        .collect();
    Ok(json!({
        "datum": d.name(),
        "highest": l.coords,
        "dimension": dimension(&d, &l)?,
        "multiplicities": rows,
    }))
}

fn tensor(s: &Settings, a: &TensorArgs) -> Out {
    let d = load_datum(s)?;
    let ws = a
        .weight
        .iter()
        .map(|t| dominant(&d, "weight", t))
        .collect::<Result<Vec<_>, _>>()?;
    let result = match a.power {
        Some(e) => {
            let [w] = ws.as_slice() else {
                return Err(CliError::usage("--power takes exactly one --weight"));
            };
            match a.mode {
                Mode::Tensor => tensor_power(&d, w, e)?,
                Mode::Sym => sym_power(&d, w, e)?,
            }
        }
        None => {
            let mut acc = VirtualCharacter::irreducible(ws[0].clone());
            for w in &ws[1..] {
                acc = multiply(&d, &acc, &VirtualCharacter::irreducible(w.clone()))?;
            }
            acc
        }
    };
    let mut out = to_value(&result.to_doc(&d));
    out["dimension"] = json!(result.virtual_dimension(&d)?);
    Ok(out)
}

fn hecke_input(d: &RootDatum, weight_text: &Option<String>, input: &Option<std::path::PathBuf>) -> Result<HeckeElement, CliError> {
    match (weight_text, input) {
        (Some(w), _) => Ok(HeckeElement::basis(d, dominant(d, "weight", w)?)),
        (None, Some(path)) => {
            let doc: HeckeElementDoc = read_json(path, "hecke element")?;
            Ok(HeckeElement::from_doc(d, &doc)?)
        }
        (None, None) => Err(CliError::usage("give --weight or --input")),
    }
}

fn satake(s: &Settings, a: &TransformArgs) -> Out {
    let d = load_datum(s)?;
    let h = hecke_input(&d, &a.weight, &a.input)?;
    let mut m = SatakeMatrices::new(&d);
    let image = m.satake(&h)?;
    Ok(to_value(&character_doc(&d, &image)))
}

fn satake_inv(s: &Settings, a: &TransformArgs) -> Out {
    let d = load_datum(s)?;
    let x = match (&a.weight, &a.input) {
        (Some(w), _) => LaurentCombination::basis(dominant(&d, "weight", w)?),
        (None, Some(path)) => {
            let doc: LaurentCharacterDoc = read_json(path, "character")?;
            character_from_doc(&d, &doc)?
        }
        (None, None) => return Err(CliError::usage("give --weight or --input")),
    };
    let mut m = SatakeMatrices::new(&d);
    Ok(to_value(&m.satake_inverse(&x)?.to_doc(&d)))
}

fn hecke_mul(s: &Settings, a: &HeckeMulArgs) -> Out {
    let d = load_datum(s)?;
    let mut factors = Vec::new();
    for w in &a.weight {
        factors.push(HeckeElement::basis(&d, dominant(&d, "weight", w)?));
    }
    for path in &a.input {
        let doc: HeckeElementDoc = read_json(path, "hecke element")?;
        factors.push(HeckeElement::from_doc(&d, &doc)?);
    }
    if factors.len() != 2 {
        return Err(CliError::usage("hecke-mul takes exactly two factors"));
    }
    let mut m = SatakeMatrices::new(&d);
    Ok(to_value(&m.hecke_multiply(&factors[0], &factors[1])?.to_doc(&d)))
}

fn kl_poly(s: &Settings, a: &KlArgs) -> Out {
    let d = load_datum(s)?;
    let l = dominant(&d, "lambda", &a.lambda)?;
    let mu = dominant(&d, "mu", &a.mu)?;
    if !d.leq(&mu, &l)? {
        return Err(Error::domain("mu_leq_lambda", format!("{mu} is not below {l}")).into());
    }
    let k = lusztig_q_analog(&d, &l, &mu)?;
    let mut m = SatakeMatrices::new(&d);
    let b = m.b(&l, &mu)?;
    let dd = m.d(&l, &mu)?;
    Ok(json!({
        "datum": d.name(),
        "lambda": l.coords,
        "mu": mu.coords,
        "q_analog": k.to_vterms(),
        "q_analog_text": k.to_string(),
        "b": b.to_vterms(),
        "d": dd.to_vterms(),
    }))
}

fn field(s: &Settings) -> Result<Arc<FiniteField>, CliError> {
    Ok(FiniteField::new(s.require_p()?, s.ext_degree)?)
}

fn load_point(s: &Settings, d: &RootDatum, a: &PointArgs) -> Result<TorusPoint, CliError> {
    if let Some(path) = &a.point {
        let doc: TorusPointDoc = read_json(path, "point")?;
        return Ok(TorusPoint::from_doc(d, &doc)?);
    }
    let f = field(s)?;
    match &a.coords {
        Some(text) => {
            let coords = text
                .split(';')
                .map(|c| f.parse_element(c.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(TorusPoint::new(d, coords)?)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            Ok(TorusPoint::random(d, &f, &mut rng))
        }
    }
}

fn sqrt_q(s: &Settings, f: &Arc<FiniteField>, q: i64) -> Result<Fe, CliError> {
    let r = match &s.sqrt_q {
        Some(text) => {
            let r = f.parse_element(text)?;
            if &r * &r != f.from_i64(q) {
                return Err(Error::domain("sqrt_q_squares_to_q", format!("{r} squared is not {q}")).into());
            }
            r
        }
        None => f.from_i64(q).sqrt().ok_or_else(|| {
            Error::domain(
                "sqrt_q_exists",
                format!("{q} has no square root in F_{}^{}", f.characteristic(), f.degree()),
            )
        })?,
    };
    Ok(r)
}

fn cutoff(s: &Settings, d: &RootDatum) -> Result<Vec<Weight>, CliError> {
    let text = s
        .cutoff
        .as_deref()
        .ok_or_else(|| CliError::usage("--cutoff is required"))?;
    weight_list(d, "cutoff", text)
}

fn eta(d: &RootDatum, name: &Option<String>) -> Result<hecke_core::root_data::CharacterOfG, CliError> {
    match name {
        Some(n) => Ok(d.character(n)?),
        None => d
            .characters()
            .next()
            .ok_or_else(|| Error::domain("has_character", format!("{} has no named character", d.name())).into()),
    }
}

fn point_docs(points: &[TorusPoint]) -> Vec<Value> {
    points.iter().map(|p| to_value(&p.to_doc())).collect()
}

fn param(s: &Settings, c: &ParamCommand) -> Out {
    let d = load_datum(s)?;
    match c {
        ParamCommand::Eval { point } => {
            let pt = load_point(s, &d, point)?;
            let lambdas = cutoff(s, &d)?;
            let mut domain = BTreeSet::new();
            for l in &lambdas {
                domain.extend(d.dominant_weights_below(l)?);
            }
            let mut keys: Vec<Weight> = domain.into_iter().collect();
            d.sort_graded(&mut keys);
            let chars = keys
                .iter()
                .map(|l| Ok(json!({"weight": l.coords, "value": to_value(&char_value(&d, &pt, l)?.to_doc())})))
                .collect::<Result<Vec<_>, CliError>>()?;
            let eigensystem = match s.q {
                Some(q) => {
                    let r = sqrt_q(s, pt.field(), q)?;
                    let mut m = SatakeMatrices::new(&d);
                    let psi = eigensystem_from_point(&mut m, &pt, q, &r, &lambdas)?;
                    to_value(&psi.to_doc(&d))
                }
                None => Value::Null,
            };
            Ok(json!({"point": to_value(&pt.to_doc()), "characters": chars, "eigensystem": eigensystem}))
        }
        ParamCommand::Twist { point, eta: name, t } => {
            let pt = load_point(s, &d, point)?;
            let e = eta(&d, name)?;
            let tv = match (t, s.q) {
                (Some(text), _) => pt.field().parse_element(text)?,
                (None, Some(q)) => pt.field().from_i64(q),
                (None, None) => return Err(CliError::usage("give --t or --q")),
            };
            let twisted = twist_point(&pt, &e, &tv)?;
            Ok(json!({
                "point": to_value(&pt.to_doc()),
                "eta": e.name,
                "t": to_value(&tv.to_doc()),
                "twisted": to_value(&twisted.to_doc()),
                "orbit": point_docs(&point_orbit(&d, &twisted)?),
            }))
        }
        ParamCommand::Recover { input } => {
            let doc: EigenSystemDoc = read_json(input, "eigensystem")?;
            let psi = EigenSystem::from_doc(&d, &doc)?;
            let mut m = SatakeMatrices::new(&d);
            let orbit = point_from_eigensystem(&mut m, &psi)?;
            Ok(json!({"orbit": point_docs(&orbit)}))
        }
        ParamCommand::CheckTwist { psi1, psi2, s1, s2, point, eta: name, perturb } => {
            let e = eta(&d, name)?;
            let mut m = SatakeMatrices::new(&d);
            let load_pt = |p: &Option<std::path::PathBuf>| -> Result<Option<TorusPoint>, CliError> {
                match p {
                    Some(path) => {
                        let doc: TorusPointDoc = read_json(path, "point")?;
                        Ok(Some(TorusPoint::from_doc(&d, &doc)?))
                    }
                    None => Ok(None),
                }
            };
            let (a, mut b, known) = match (psi1, psi2) {
                (Some(f1), Some(f2)) => {
                    let a = EigenSystem::from_doc(&d, &read_json(f1, "psi1")?)?;
                    let b = EigenSystem::from_doc(&d, &read_json(f2, "psi2")?)?;
                    let known = match load_pt(s1)? {
                        Some(p1) => Some(KnownPoints { s1: p1, s2: load_pt(s2)? }),
                        None => None,
                    };
                    (a, b, known)
                }
                _ => {
                    let pt = load_point(s, &d, point)?;
                    let q = s.require_q()?;
                    let r = sqrt_q(s, pt.field(), q)?;
                    let lambdas = cutoff(s, &d)?;
                    let twisted = twist_point(&pt, &e, &pt.field().from_i64(q))?;
                    let a = eigensystem_from_point(&mut m, &pt, q, &r, &lambdas)?;
                    let b = eigensystem_from_point(&mut m, &twisted, q, &r, &lambdas)?;
                    (a, b, Some(KnownPoints { s1: pt, s2: None }))
                }
            };
            if let Some(text) = perturb {
                let w = dominant(&d, "perturb", text)?;
                if !b.values.contains_key(&w) {
                    return Err(Error::domain("perturb_in_domain", format!("{w} is outside the eigensystem")).into());
                }
                let one = b.field().one();
                b = b.perturbed(&w, &one);
            }
            let recoverable = d.name().starts_with("gl") && !d.name().contains('x');
            let points = if recoverable { None } else { known.as_ref() };
            if !recoverable && points.is_none() {
                return Err(Error::domain(
                    "points_known",
                    format!("{} needs --s1 (and optionally --s2)", d.name()),
                )
                .into());
            }
            Ok(to_value(&check_twist_theorem(&mut m, &a, &b, &e, points)?))
        }
    }
}

fn parse_aut_weight(field: &str, text: &str) -> Result<AutWeight, CliError> {
    Ok(AutWeight::new(
        text.split(';').map(|b| parse_ints(field, b)).collect::<Result<Vec<_>, _>>()?,
    ))
}

fn signature(a: &SignatureArgs, fallback: &AutWeight) -> Result<SignatureData, CliError> {
    if let Some(g) = a.siegel {
        return Ok(SignatureData::siegel(g)?);
    }
    match &a.signature {
        Some(text) if text.trim_start().starts_with('{') => Ok(SignatureData::from_json(text)?),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{path}: {e}")))?;
            Ok(SignatureData::from_json(&text)?)
        }
        None => match fallback.parts.as_slice() {
            [one] => Ok(SignatureData::siegel(one.len())?),
            _ => Err(CliError::usage("give --signature or --siegel for multi-block weights")),
        },
    }
}

fn power_mode(m: Mode) -> PowerMode {
    match m {
        Mode::Tensor => PowerMode::Tensor,
        Mode::Sym => PowerMode::Sym,
    }
}

fn adm(s: &Settings, c: &AdmCommand) -> Out {
    let _ = s;
    match c {
        AdmCommand::Check { sig, weight, mode } => {
            let k = parse_aut_weight("weight", weight)?;
            let sd = signature(sig, &k)?;
            let characterized = is_admissible_characterized(&sd, &k)?;
            let mut out = json!({
                "weight": to_value(&k),
                "abs_weight": k.abs_weight(),
                "positive": k.is_positive(),
                "admissible": characterized,
            });
            match sd.case {
                Case::C => out["even"] = json!(k.is_even()),
                Case::A => out["sum_symmetric"] = json!(is_sum_symmetric(&sd, &k)?),
            }
            if characterized {
                out["depth"] = json!(depth(&sd, &k)?);
            }
            if let Some(m) = mode {
                let abs = k.abs_weight();
                let member = abs > 0
                    && abs % 2 == 0
                    && is_constituent_depth_e(&sd, &k, (abs / 2) as u32, power_mode(*m))?;
                out["constituent"] = json!(member);
            }
            Ok(out)
        }
        AdmCommand::Constituents { sig, depth: e, mode } => {
            let sd = signature(sig, &AutWeight::new(Vec::new()))?;
            let rows: Vec<Value> = constituents(&sd, *e, power_mode(*mode))?
                .into_iter()
                .map(|(w, m)| json!({"weight": to_value(&w), "mult": m}))
                .collect();
            Ok(json!({"depth": e, "constituents": rows}))
        }
        AdmCommand::Shift { sig, kappa, lambda } => {
            let p = s.require_p()?;
            let k = parse_aut_weight("kappa", kappa)?;
            let l = parse_aut_weight("lambda", lambda)?;
            let sd = signature(sig, &k)?;
            let shifted = weight_shift(&sd, &k, &l, p)?;
            Ok(json!({"kappa": to_value(&k), "lambda": to_value(&l), "p": p, "shifted": to_value(&shifted)}))
        }
        AdmCommand::Depth { sig, weight } => {
            let k = parse_aut_weight("weight", weight)?;
            let sd = signature(sig, &k)?;
            Ok(json!({"weight": to_value(&k), "depth": depth(&sd, &k)?}))
        }
    }
}

fn load_form(s: &Settings, a: &FormArgs, trunc: usize) -> Result<QExpansion, CliError> {
    if let Some(path) = &a.input {
        let doc: QExpansionDoc = read_json(path, "q-expansion")?;
        let f = QExpansion::from_doc(&doc)?;
        return Ok(match (f.prime(), s.p) {
            (None, Some(p)) => f.reduce(p)?,
            (Some(fp), Some(p)) if fp != p => {
                return Err(Error::domain("same_prime", format!("series is mod {fp}, --p is {p}")).into())
            }
            _ => f,
        });
    }
    let p = s.require_p()?;
    let name = a.form.as_deref().unwrap_or("delta");
    let f = match name {
        "delta" => delta_mod_p(p, trunc)?,
        "e4" => eisenstein4_mod(p, trunc)?,
        "e6" => eisenstein6_mod(p, trunc)?,
        "hasse" => hasse(p, trunc)?,
        other => {
            let idx: usize = other
                .strip_prefix("basis:")
                .and_then(|i| i.parse().ok())
                .ok_or_else(|| CliError::usage(format!("unknown form `{other}`")))?;
            let k = s.require_k()?;
            let b = basis(k, p, trunc)?;
            b.get(idx).cloned().ok_or_else(|| {
                Error::domain("basis_index", format!("M_{k} has dimension {}", b.len()))
            })?
        }
    };
    Ok(f)
}

fn mf(s: &Settings, c: &MfCommand) -> Out {
    let n = s.n;
    match c {
        MfCommand::Basis => {
            let b = basis(s.require_k()?, s.require_p()?, n)?;
            Ok(json!({"basis": b.iter().map(|f| to_value(&f.to_doc())).collect::<Vec<_>>()}))
        }
        MfCommand::Theta { form } => {
            let f = load_form(s, form, n)?;
            Ok(to_value(&theta(&f)?.to_doc()))
        }
        MfCommand::Hecke { form } => {
            let ell = s.ell()?;
            let f = load_form(s, form, n * ell as usize)?;
            Ok(to_value(&hecke_t(ell, &f)?.to_doc()))
        }
        MfCommand::Filtration { form } => {
            let f = load_form(s, form, n)?;
            Ok(json!({"weight": f.weight, "filtration": filtration(&f)?}))
        }
        MfCommand::Cycle { form, iterations } => {
            let p = s.require_p()?;
            let iters = iterations.unwrap_or(p as usize + 1);
            let weight_guess = s.k.unwrap_or(12).max(12);
            let trunc = n.max(sturm_bound(weight_guess + iters as i64 * (p as i64 + 1)));
            let f = load_form(s, form, trunc)?;
            Ok(to_value(&theta_cycle(&f, iters)?))
        }
        MfCommand::Commcheck { form } => {
            let ell = s.ell()?;
            let trunc = n * ell as usize;
            let forms: Vec<QExpansion> = if form.form.is_none() && form.input.is_none() {
                basis(s.require_k()?, s.require_p()?, trunc)?.as_ref().clone()
            } else {
                vec![load_form(s, form, trunc)?]
            };
            let mut ok = true;
            for f in &forms {
                ok &= commutation_check(f, ell, n)?;
            }
            Ok(json!({"ok": ok}))
        }
        MfCommand::Twistcheck { form } => {
            let ells = s.ells()?;
            let top = ells.iter().copied().max().unwrap_or(1) as usize;
            let f = load_form(s, form, n * top)?;
            Ok(to_value(&eigen_twist_check(&f, &ells, n)?))
        }
    }
}

fn selftest(s: &Settings, criterion: Option<u32>) -> Result<Outcome, CliError> {
    let reports = match criterion {
        Some(id) if (1..=acceptance::CRITERIA).contains(&id) => vec![acceptance::run(id, s.seed)],
        Some(id) => return Err(CliError::usage(format!("no criterion {id}"))),
        None => acceptance::run_all(s.seed),
    };
    let failed = reports.iter().filter(|r| !r.passed).count();
    Ok(Outcome {
        value: json!({
            "seed": s.seed,
            "passed": reports.len() - failed,
            "failed": failed,
            "criteria": to_value(&reports),
        }),
        exit_code: if failed == 0 { 0 } else { EXIT_SELFTEST_FAILED },
    })
}

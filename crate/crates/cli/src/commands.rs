use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use cdl_core::bounds::{absolute_code_bound, antipodal_bound, builtin, congruent_part, lp_bound, LpMode};
use cdl_core::construct::*;
use cdl_core::design::{is_design, max_design_strength};
use cdl_core::grouprep::{
    builtin_group, close_group, harm_irreducible, molien_harm, molien_hom, orbit_design_strength, read_generators,
    DEFAULT_GROUP_CAP,
};
use cdl_core::poly::{BiDegree, LowerSet, ZonalPoly};
use cdl_core::scheme::{check_scheme, gram_idempotent, invariance_check, krein_design_check, RelationPartition};
use cdl_core::space::{angle_set, read_point_set, write_point_set, PointSet};
use cdl_core::{FiniteUnitaryGroup, MubFamily};
use serde_json::json;

use crate::report::{expansion_map, fmt_complex, read_input, Complex, InputDigest, RunReport, Settings, Timer};
use crate::{Builtin, Cli, Command, Mode};

/// Point sets above this size need `--slow` for the scheme test.
pub const SLOW_THRESHOLD: usize = 500;

pub const CONSTRUCTIONS: &[(&str, &str)] = &[
    ("sic-d2", "16-point 4-antipodal SIC cover in C^2"),
    ("hoggar", "256-point Hoggar lines cover in C^8"),
    ("coxeter-27", "27 points in C^3"),
    ("coxeter-42", "42 points in C^3"),
    ("coxeter-56", "56 points in C^3"),
    ("coxeter-240", "240 points in C^4"),
    ("coxeter-756", "756 points in C^6"),
    ("kerdock <r>", "Z4-Kerdock vector set, 4·2^r(2^r+1) points in C^(2^r), r odd"),
    ("mub-odd <m>", "4-antipodal MUB cover in C^(2^m), m odd"),
    ("mub-even <m>", "4-antipodal MUB cover in C^(2^m), m even"),
    ("mub-odd-prime <p>", "p non-standard bases of C^p"),
    ("mub-odd-prime-complete <p>", "all p+1 bases of C^p"),
    ("cross-polytope <d> <n>", "n-antipodal cover of the standard basis"),
    ("simplex-cover <d>", "2d+1 points with constant real inner product"),
    ("singer <q>", "q^2+q+1 points from a Singer difference set"),
    ("paley <q>", "Paley tournament scheme embedding, q ≡ 3 mod 4"),
    ("conference <n>", "design from the first skew conference matrix of order n"),
    ("conference-paley <q>", "design from the Paley skew conference matrix of order q+1"),
    ("oa-9-4-3-2", "orthogonal array OA(9,4,3,2) design"),
];

type Outcome = (RunReport, String);

fn report(inputs: Vec<InputDigest>, timer: Timer, verdict: bool, summary: String, result: serde_json::Value) -> RunReport {
    RunReport {
        tool: "cdl".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: Vec::new(),
        inputs,
        settings: Settings { tol: 0.0, cutoff: 0, threads: None, slow: false },
        verdict,
        summary,
        result,
        timings_ms: timer.stages,
    }
}

fn load_points(path: &Path, inputs: &mut Vec<InputDigest>) -> Result<PointSet> {
    let text = read_input(path, inputs)?;
    read_point_set(&text).with_context(|| format!("{}", path.display()))
}

fn parse_set(s: &str) -> Result<LowerSet> {
    s.parse::<LowerSet>().map_err(|e| anyhow!("{e}"))
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify { file, design } => verify(cli, file, design.as_deref()),
        Command::Scheme { file, slow } => scheme(cli, file, *slow),
        Command::Bound { d, builtin, annihilator, mode, design_set, points, absolute, antipodal, set } => bound(
            *d,
            BoundArgs {
                builtin: *builtin,
                annihilator: annihilator.as_deref(),
                mode: *mode,
                design_set: design_set.as_deref(),
                points: points.as_deref(),
                absolute: absolute.as_deref(),
                antipodal: *antipodal,
                set: set.as_deref(),
            },
        ),
        Command::Construct { name, params } => construct(cli, name, params),
        Command::Molien { args } => molien(args),
        Command::Derive { file, z, alpha } => derive(cli, file, *z, *alpha),
    }
}

fn verify(cli: &Cli, file: &Path, design: Option<&str>) -> Result<Outcome> {
    let mut inputs = Vec::new();
    let mut timer = Timer::default();
    let x = timer.time("read", || load_points(file, &mut inputs))?;
    let wanted = design.map(parse_set).transpose()?;
    let angles = timer.time("angles", || angle_set(&x))?;
    let strength = timer.time("design", || max_design_strength(&x, cli.cutoff, cli.tol));
    let invariance = timer.time("invariance", || invariance_check(&x))?;
    let membership = wanted.as_ref().map(|t| (t.to_string(), is_design(&x, t, cli.tol)));
    let verdict = membership.as_ref().map_or(true, |(_, ok)| *ok);

    let mut text = String::new();
    writeln!(text, "points: {} in C^{}", x.len(), x.dim())?;
    writeln!(text, "degree: {}", angles.len())?;
    writeln!(text, "angles:")?;
    for (i, (a, n)) in angles.values.iter().zip(&angles.counts).enumerate() {
        writeln!(text, "  [{i}] {}  (|a| = {:.10}, {n} ordered pairs)", fmt_complex(*a), a.norm())?;
    }
    writeln!(text, "design strength (cutoff {}, tol {:e}): {}", cli.cutoff, cli.tol, strength.verdict)?;
    writeln!(text, "inner product invariant: {} (valencies {:?})", invariance.invariant, invariance.valencies)?;
    if let Some((t, ok)) = &membership {
        writeln!(text, "{t}-design: {ok}")?;
    }
    let summary = format!("design strength {}", strength.verdict);
    let result = json!({
        "points": x.len(),
        "dimension": x.dim(),
        "degree": angles.len(),
        "angles": angles.values.iter().zip(&angles.counts)
            .map(|(a, n)| json!({"value": Complex::from(*a), "pairs": n})).collect::<Vec<_>>(),
        "design": strength,
        "invariance": invariance,
        "membership": membership.map(|(t, ok)| json!({"set": t, "holds": ok})),
    });
    Ok((report(inputs, timer, verdict, summary, result), text))
}

fn scheme(cli: &Cli, file: &Path, slow: bool) -> Result<Outcome> {
    let mut inputs = Vec::new();
    let mut timer = Timer::default();
    let x = timer.time("read", || load_points(file, &mut inputs))?;
    let n = x.len();
    if n > SLOW_THRESHOLD && !slow {
        bail!(
            "{n} points: the exact closure test walks n^3 = {:.1e} triples (about {:.0} s in a release build); rerun with --slow",
            (n as f64).powi(3),
            (n as f64 / 756.0).powi(3).max(0.1)
        );
    }
    let rp = timer.time("relations", || RelationPartition::from_points(&x))?;
    let rep = timer.time("closure", || check_scheme(&rp));
    let krein = match (&rep.eigen, gram_idempotent(&rep, x.dim())) {
        (Some(e), Some(j)) => {
            let t = LowerSet::total_degree(cli.cutoff);
            Some(timer.time("krein", || krein_design_check(e, j, &t, cli.tol))?)
        }
        _ => None,
    };

    let mut text = String::new();
    writeln!(text, "points: {n} in C^{}", x.dim())?;
    writeln!(text, "relations: {} ({} classes), valencies {:?}", rep.classes + 1, rep.classes, rep.valencies)?;
    writeln!(text, "inner product invariant: {}", rep.inner_product_invariant)?;
    writeln!(text, "association scheme: {}", rep.is_scheme)?;
    if rep.is_scheme {
        writeln!(text, "symmetric: {}", rep.symmetric)?;
        writeln!(text, "commutative: {}", rep.commutative)?;
    } else if let Some(w) = rep.witnesses.first() {
        writeln!(
            text,
            "witness: A_{}A_{} not in span; pairs {:?} and {:?} in relation {} have {} and {} paths",
            w.i, w.j, w.first, w.second, w.relation, w.first_count, w.second_count
        )?;
    }
    if let Some(e) = &rep.eigen {
        writeln!(text, "multiplicities: {:?}", e.multiplicities)?;
        writeln!(text, "second eigenmatrix Q (rows: relations, columns: idempotents):")?;
        for row in &e.q {
            let cells: Vec<String> = row.iter().map(|z| fmt_complex(*z)).collect();
            writeln!(text, "  {}", cells.join("  "))?;
        }
    }
    if let Some(k) = &krein {
        writeln!(text, "embedding idempotent E_{} (rank {}), Krein design verdict: {}", k.idempotent, k.dim, k.verdict)?;
    }
    let summary = if rep.is_scheme {
        format!("{} scheme with {} classes", if rep.symmetric { "symmetric" } else { "nonsymmetric" }, rep.classes)
    } else {
        "not an association scheme".to_string()
    };
    let result = json!({"scheme": rep, "krein_design": krein});
    Ok((report(inputs, timer, rep.is_scheme, summary, result), text))
}

pub struct BoundArgs<'a> {
    builtin: Option<Builtin>,
    annihilator: Option<&'a Path>,
    mode: Mode,
    design_set: Option<&'a str>,
    points: Option<&'a Path>,
    absolute: Option<&'a str>,
    antipodal: Option<u32>,
    set: Option<&'a str>,
}

fn bound(d: u32, a: BoundArgs<'_>) -> Result<Outcome> {
    if d < 1 {
        bail!("dimension must be positive");
    }
    let mut inputs = Vec::new();
    let mut timer = Timer::default();
    let mut text = String::new();
    if let Some(s) = a.absolute {
        let s = parse_set(s)?;
        let b = absolute_code_bound(d, &s);
        writeln!(text, "absolute bound for {s} in C^{d}: {b}")?;
        let result = json!({"kind": "absolute", "set": s.to_string(), "bound": b});
        return Ok((report(inputs, timer, true, format!("|X| <= {b}"), result), text));
    }
    if let Some(n) = a.antipodal {
        let s = parse_set(a.set.unwrap_or_default())?;
        let b = antipodal_bound(d, &s, n)?;
        let congruent: Vec<String> = congruent_part(&s, n).iter().map(BiDegree::to_string).collect();
        writeln!(text, "{n}-antipodal bound for {s} in C^{d}: {b}")?;
        let result = json!({"kind": "antipodal", "set": s.to_string(), "order": n, "congruent": congruent, "bound": b});
        return Ok((report(inputs, timer, true, format!("|X| <= {b}"), result), text));
    }
    let (name, f) = match (a.builtin, a.annihilator) {
        (Some(b), None) => {
            let f = match b {
                Builtin::Sic => builtin::sic(d),
                Builtin::Kerdock => builtin::kerdock(d),
                Builtin::KerdockEven => builtin::kerdock_even(d),
                Builtin::Simplex => builtin::simplex(d),
            };
            (format!("{b:?}").to_lowercase(), f)
        }
        (None, Some(path)) => {
            let body = read_input(path, &mut inputs)?;
            let f = ZonalPoly::parse_terms(&body).with_context(|| format!("{}", path.display()))?;
            (path.display().to_string(), f)
        }
        _ => bail!("give exactly one of --builtin, --annihilator, --absolute or --antipodal"),
    };
    let mode = match a.mode {
        Mode::Upper => LpMode::Upper,
        Mode::Lower => {
            let t = a.design_set.ok_or_else(|| anyhow!("--mode lower needs --design-set"))?;
            LpMode::Lower { t: parse_set(t)? }
        }
    };
    let angles = match a.points {
        Some(p) => {
            let x = load_points(p, &mut inputs)?;
            if x.dim() as u32 != d {
                bail!("{} lives in C^{}, not C^{d}", p.display(), x.dim());
            }
            angle_set(&x)?.values
        }
        None => Vec::new(),
    };
    let cert = timer.time("lp", || lp_bound(d, &f, &mode, &angles))?;
    let relation = if a.mode == Mode::Upper { "<=" } else { ">=" };
    writeln!(text, "annihilator: {name}")?;
    writeln!(text, "F(1) = {}, f_00 = {}", cert.f_at_one, cert.f00)?;
    writeln!(text, "bound: |X| {relation} {} ({:.6})", cert.value, num_traits::ToPrimitive::to_f64(&cert.value).unwrap_or(f64::NAN))?;
    writeln!(text, "Jacobi coefficients:")?;
    for (deg, c) in cert.expansion.iter() {
        writeln!(text, "  f{deg} = {c}")?;
    }
    if angles.is_empty() {
        writeln!(text, "sign conditions at angles: not checked (no --points)")?;
    }
    for v in &cert.violations {
        writeln!(text, "violation: {v}")?;
    }
    writeln!(text, "certificate valid: {}", cert.is_valid())?;
    let result = json!({
        "kind": "lp",
        "annihilator": name,
        "polynomial": f.to_terms_string(),
        "mode": mode,
        "bound": crate::report::Rational::from(&cert.value),
        "f_at_one": crate::report::Rational::from(&cert.f_at_one),
        "f00": crate::report::Rational::from(&cert.f00),
        "expansion": expansion_map(&cert.expansion),
        "angle_values": cert.angle_values.iter()
            .map(|(a, v)| json!({"angle": Complex::from(*a), "value": Complex::from(*v)})).collect::<Vec<_>>(),
        "violations": cert.violations,
    });
    let summary = format!("|X| {relation} {}", cert.value);
    Ok((report(inputs, timer, cert.is_valid(), summary, result), text))
}

fn param(params: &[u64], i: usize, name: &str) -> Result<u64> {
    params.get(i).copied().ok_or_else(|| anyhow!("`{name}` needs {} parameter(s)", i + 1))
}

pub fn build(name: &str, params: &[u64]) -> Result<PointSet> {
    let p0 = || param(params, 0, name);
    let x = match name {
        "sic-d2" => sic_d2()?,
        "hoggar" => hoggar()?,
        "coxeter-27" => coxeter_27()?,
        "coxeter-42" => coxeter_42()?,
        "coxeter-56" => coxeter_56()?,
        "coxeter-240" => coxeter_240()?,
        "coxeter-756" => coxeter_756()?,
        "kerdock" => kerdock_code_set(p0()? as usize)?,
        "mub-odd" => mub_cover(MubFamily::Odd, p0()? as usize)?,
        "mub-even" => mub_cover(MubFamily::Even, p0()? as usize)?,
        "mub-odd-prime" => mub_odd_prime(p0()?)?,
        "mub-odd-prime-complete" => mub_odd_prime_complete(p0()?)?,
        "cross-polytope" => cross_polytope(p0()? as usize, param(params, 1, name)? as u32)?,
        "simplex-cover" => regular_simplex_cover(p0()? as usize)?,
        "singer" => singer_design(p0()?)?,
        "paley" => paley_tournament_design(p0()?)?,
        "conference" => {
            let n = p0()? as usize;
            let c = skew_conference_search(n)?.ok_or_else(|| anyhow!("no skew conference matrix of order {n}"))?;
            conference_to_design(&c)?
        }
        "conference-paley" => conference_to_design(&paley_skew_conference(p0()?)?)?,
        "oa-9-4-3-2" => oa_design(&oa_9_4_3_2(), 3, 2)?,
        _ => {
            let names: Vec<&str> = CONSTRUCTIONS.iter().map(|(n, _)| *n).collect();
            bail!("unknown construction `{name}`; available: {}", names.join(", "))
        }
    };
    Ok(x)
}

fn construct(cli: &Cli, name: &str, params: &[u64]) -> Result<Outcome> {
    let timer_inputs = Vec::new();
    let mut timer = Timer::default();
    if name == "list" {
        let text: String = CONSTRUCTIONS.iter().map(|(n, what)| format!("{n:<30} {what}\n")).collect();
        let result = json!(CONSTRUCTIONS.iter().map(|(n, w)| json!({"name": n, "description": w})).collect::<Vec<_>>());
        return Ok((report(timer_inputs, timer, true, "constructions".into(), result), text));
    }
    let x = timer.time("construct", || build(name, params))?;
    let file = write_point_set(&x);
    let text = match &cli.output {
        Some(path) => {
            std::fs::write(path, &file).with_context(|| format!("cannot write {}", path.display()))?;
            format!("{name}: {} points in C^{} written to {}\n", x.len(), x.dim(), path.display())
        }
        None => file,
    };
    let result = json!({
        "name": name,
        "params": params,
        "points": x.len(),
        "dimension": x.dim(),
        "output": cli.output.as_ref().map(|p| p.display().to_string()),
    });
    let summary = format!("{} points in C^{}", x.len(), x.dim());
    Ok((report(timer_inputs, timer, true, summary, result), text))
}

fn group_from_args(args: &[String], inputs: &mut Vec<InputDigest>) -> Result<(FiniteUnitaryGroup, String, usize)> {
    let name = args[0].as_str();
    match name {
        "pauli" | "trivial" => {
            let d: usize = args.get(1).and_then(|v| v.parse().ok()).ok_or_else(|| anyhow!("`{name}` needs a dimension"))?;
            Ok((builtin_group(name, Some(d))?, format!("{name} {d}"), 2))
        }
        "file" => {
            let path = args.get(1).ok_or_else(|| anyhow!("`file` needs a path"))?;
            let text = read_input(Path::new(path), inputs)?;
            let gens = read_generators(&text).with_context(|| path.clone())?;
            Ok((close_group(gens, DEFAULT_GROUP_CAP, path.clone())?, format!("file {path}"), 2))
        }
        _ => Ok((builtin_group(name, None)?, name.to_string(), 1)),
    }
}

fn molien(args: &[String]) -> Result<Outcome> {
    let mut inputs = Vec::new();
    let mut timer = Timer::default();
    let (g, label, used) = timer.time("group", || group_from_args(args, &mut inputs))?;
    let rest = &args[used..];
    if rest.len() != 2 {
        bail!("expected kmax and lmax after the group, found {:?}", rest);
    }
    let kmax: u32 = rest[0].parse().with_context(|| format!("bad kmax `{}`", rest[0]))?;
    let lmax: u32 = rest[1].parse().with_context(|| format!("bad lmax `{}`", rest[1]))?;
    let hom = timer.time("hom", || molien_hom(&g, kmax, lmax))?;
    let harm = timer.time("harm", || molien_harm(&g, kmax, lmax))?;
    let mut irreducible = Vec::new();
    for k in 0..=kmax {
        for l in 0..=lmax {
            let deg = BiDegree::new(k, l);
            irreducible.push((deg, harm_irreducible(&g, deg)?));
        }
    }
    let u = LowerSet::new((0..=kmax.min(1)).flat_map(|k| (0..=lmax.min(1)).map(move |l| BiDegree::new(k, l))).filter(|d| d.total() <= 1))?;
    let guarantee = timer.time("orbit", || orbit_design_strength(&g, &u))?;

    let mut text = String::new();
    writeln!(text, "group: {label}, order {}, acting on C^{}", g.order(), g.dim())?;
    for (title, table) in [("dim Hom(k,l)^G", &hom), ("dim Harm(k,l)^G", &harm)] {
        writeln!(text, "{title} (rows k = 0..{kmax}, columns l = 0..{lmax}):")?;
        for row in &table.entries {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>4}")).collect();
            writeln!(text, "  {}", cells.join(""))?;
        }
    }
    let irr: Vec<String> = irreducible.iter().filter(|(_, ok)| *ok).map(|(d, _)| d.to_string()).collect();
    writeln!(text, "irreducible Harm(k,l): {}", irr.join(" "))?;
    writeln!(text, "every orbit is a {}-design", guarantee.guaranteed)?;
    let result = json!({
        "group": label,
        "order": g.order(),
        "dimension": g.dim(),
        "hom": hom,
        "harm": harm,
        "irreducible": irreducible.iter().map(|(d, ok)| json!({"degree": d, "irreducible": ok})).collect::<Vec<_>>(),
        "orbit_guarantee": guarantee,
    });
    let summary = format!("orbits are {}-designs", guarantee.guaranteed);
    Ok((report(inputs, timer, true, summary, result), text))
}

fn derive(cli: &Cli, file: &Path, z: usize, alpha: usize) -> Result<Outcome> {
    let mut inputs = Vec::new();
    let mut timer = Timer::default();
    let x = timer.time("read", || load_points(file, &mut inputs))?;
    if z >= x.len() {
        bail!("point index {z} out of range (0..{})", x.len());
    }
    let angles = angle_set(&x)?;
    let a = *angles.values.get(alpha).ok_or_else(|| anyhow!("angle index {alpha} out of range (0..{})", angles.len()))?;
    let y = timer.time("derive", || derived_code(&x, z, a, x.tol()))?;
    let file_text = write_point_set(&y);
    let text = match &cli.output {
        Some(path) => {
            std::fs::write(path, &file_text).with_context(|| format!("cannot write {}", path.display()))?;
            format!("derived code at alpha = {}: {} points in C^{} written to {}\n", fmt_complex(a), y.len(), y.dim(), path.display())
        }
        None => file_text,
    };
    let result = json!({
        "source_points": x.len(),
        "z": z,
        "alpha": Complex::from(a),
        "points": y.len(),
        "dimension": y.dim(),
        "output": cli.output.as_ref().map(|p| p.display().to_string()),
    });
    let summary = format!("{} points in C^{}", y.len(), y.dim());
    Ok((report(inputs, timer, true, summary, result), text))
}

use std::fs::File;
use std::io::{BufWriter, Write};
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use bmfano::config::{
    diagonal_completion, extend_onan_to_fano, fano_isomorphism, fano_onans, verify_fano, verify_onan, FanoConfig,
};
use bmfano::discovery::{
    compare_special_counts, enumerate_special_fanos, fengli_fano, search_ordinary_fanos, FengLiInput, UnitalIncidence,
};
use bmfano::gf::{base_json, ext_json, parse_base, parse_ext, BaseField, ExtElem, ExtField, FieldSpec, Tower};
use bmfano::plane::{lines_json, Line, Point};
use bmfano::unital::{classify_unitals, known_class_count, OrthogonalBm, TitsUnital, Unital};
use bmfano::{worked, Error};
use bmfano_suite as suite;

use crate::args::*;
use crate::output::Emitter;

pub const ORTHOGONAL_ORDERS: [u32; 5] = [4, 8, 16, 32, 64];
pub const TITS_ORDERS: [u32; 4] = [8, 32, 128, 512];

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The input was well formed but failed the requested check.
    CheckFailed,
    /// A construction that must succeed did not, or counts disagreed.
    Violation,
}

/// Exit code for an error: 2 for bad input, 3 for an unsupported order,
/// 4 for a violated invariant, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::UnsupportedOrder(_) | Error::UnsupportedDegree(_)) => 3,
        Some(Error::Invariant(_) | Error::Construction(_)) => 4,
        Some(_) => 2,
        None => 1,
    }
}

struct Ctx<'a> {
    global: &'a Global,
    start: Instant,
    em: Emitter,
}

impl Ctx<'_> {
    fn header(&mut self, command: &str, field: &ExtField, extra: Value) -> Result<()> {
        let mut body = json!({
            "command": command,
            "q": field.q(),
            "field": FieldSpec::of(field),
        });
        if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
            b.extend(e);
        }
        self.em.emit("header", body)
    }

    fn summary(&mut self, raw: u64, dedup: u64, multiplicity: Option<u64>, extra: Value) -> Result<()> {
        let mut body = json!({
            "raw_count": raw,
            "dedup_count": dedup,
            "multiplicity": multiplicity,
        });
        if !self.global.no_timing {
            body["wall_time"] = json!(self.start.elapsed().as_secs_f64());
        }
        if let (Value::Object(b), Value::Object(e)) = (&mut body, extra) {
            b.extend(e);
        }
        self.em.emit("summary", body)
    }
}

fn degree_of(q: u32, allowed: &[u32]) -> Result<u32> {
    if !allowed.contains(&q) {
        return Err(Error::UnsupportedOrder(q).into());
    }
    Ok(q.trailing_zeros())
}

fn parse_modulus(s: &str) -> Result<u32> {
    let digits = s.trim_start_matches("0x").trim_start_matches("0X");
    u32::from_str_radix(digits, 16).map_err(|e| {
        Error::Parse {
            input: s.to_string(),
            reason: e.to_string(),
        }
        .into()
    })
}

fn base_field(m: u32, modulus: &Option<String>) -> Result<BaseField> {
    Ok(match modulus {
        Some(s) => BaseField::with_modulus(m, parse_modulus(s)?)?,
        None => BaseField::new(m)?,
    })
}

fn orthogonal_field(q: u32, g: &Global) -> Result<Arc<ExtField>> {
    let m = degree_of(q, &ORTHOGONAL_ORDERS)?;
    Ok(Arc::new(ExtField::new(base_field(m, &g.modulus)?, Tower::Orthogonal)?))
}

fn tits_unital(q: u32, g: &Global) -> Result<TitsUnital> {
    let m = degree_of(q, &TITS_ORDERS)?;
    let field = Arc::new(ExtField::new(base_field(m, &g.modulus)?, Tower::Tits)?);
    Ok(TitsUnital::new(field)?)
}

enum AnyUnital {
    Bm(OrthogonalBm),
    Tits(TitsUnital),
}

impl AnyUnital {
    fn as_dyn(&self) -> &dyn Unital {
        match self {
            AnyUnital::Bm(u) => u,
            AnyUnital::Tits(u) => u,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            AnyUnital::Bm(u) => u.to_json(),
            AnyUnital::Tits(u) => u.to_json(),
        }
    }
}

fn bm_unital(field: &Arc<ExtField>, a: &str, b: &str) -> Result<OrthogonalBm> {
    let a = parse_ext(field, a)?;
    let b = parse_ext(field, b)?;
    Ok(OrthogonalBm::new(field.clone(), a, b)?)
}

fn unital(args: &UnitalArgs, g: &Global) -> Result<AnyUnital> {
    match args.family {
        Family::Bm => {
            let field = orthogonal_field(args.q, g)?;
            let (Some(a), Some(b)) = (&args.a, &args.b) else {
                return Err(Error::InvalidSpec("--family bm needs --a and --b".into()).into());
            };
            Ok(AnyUnital::Bm(bm_unital(&field, a, b)?))
        }
        Family::Tits => {
            if args.a.is_some() || args.b.is_some() {
                return Err(Error::InvalidSpec("--a and --b apply to --family bm only".into()).into());
            }
            Ok(AnyUnital::Tits(tits_unital(args.q, g)?))
        }
    }
}

fn parse_triple(field: &ExtField, s: &str) -> Result<[ExtElem; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, z] = parts.as_slice() else {
        return Err(Error::Parse {
            input: s.to_string(),
            reason: "expected three comma-separated coordinates".into(),
        }
        .into());
    };
    Ok([parse_ext(field, x)?, parse_ext(field, y)?, parse_ext(field, z)?])
}

fn parse_point(field: &ExtField, s: &str) -> Result<Point> {
    Ok(Point::new(field, parse_triple(field, s)?)?)
}

fn parse_list<const N: usize, T>(
    field: &ExtField,
    s: &str,
    one: impl Fn(&ExtField, &str) -> Result<T>,
) -> Result<[T; N]> {
    let items = s
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| one(field, p))
        .collect::<Result<Vec<T>>>()?;
    let n = items.len();
    items.try_into().map_err(|_| {
        Error::Parse {
            input: s.to_string(),
            reason: format!("expected {N} entries separated by ';', got {n}"),
        }
        .into()
    })
}

fn parse_lines(field: &ExtField, s: &str) -> Result<[Line; 4]> {
    parse_list(field, s, |f, p| Ok(Line::new(f, parse_triple(f, p)?)?))
}

fn fano_json(field: &ExtField, fano: &FanoConfig, u: &dyn Unital) -> Result<Value> {
    let mut v = fano.to_json(field);
    let subs = fano_onans(field, fano, |p| u.contains(p), &u.special_point())?;
    v["sub_onans"] = Value::Array(
        subs.iter()
            .map(|s| {
                json!({
                    "omitted": s.omitted.to_json(field),
                    "avoids_special": s.avoids_special,
                    "lines": lines_json(field, s.onan.lines()),
                })
            })
            .collect(),
    );
    v["isomorphic_to_pg22"] = json!(fano_isomorphism(&fano.incidence_matrix(field)).is_some());
    Ok(v)
}

pub fn run(cli: &Cli) -> Result<Status> {
    if cli.global.threads == Some(0) {
        return Err(Error::InvalidSpec("thread count must be positive".into()).into());
    }
    let out: Box<dyn Write> = match &cli.global.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    let mut ctx = Ctx {
        global: &cli.global,
        start: Instant::now(),
        em: Emitter::new(out, cli.global.format)?,
    };
    let status = dispatch(&mut ctx, &cli.command)?;
    ctx.em.finish()?;
    Ok(status)
}

fn dispatch(ctx: &mut Ctx, command: &Command) -> Result<Status> {
    let g = ctx.global;
    match command {
        Command::Field {
            command: FieldCommand::Info { q, family },
        } => {
            let field = match family {
                Family::Bm => orthogonal_field(*q, g)?,
                Family::Tits => tits_unital(*q, g)?.field_arc().clone(),
            };
            ctx.header("field info", &field, json!({}))?;
            let base = field.base();
            let d = field.delta();
            ctx.em.emit(
                "field",
                json!({
                    "m": base.degree(),
                    "q": field.q(),
                    "modulus": format!("{:#x}", base.modulus()),
                    "w": base_json(base, base.generator()),
                    "tower": field.tower(),
                    "v": base_json(base, field.v()),
                    "delta_squared": ext_json(&field, field.square(d)),
                    "delta_to_q": ext_json(&field, field.pow(d, u64::from(field.q()))),
                    "generator": ext_json(&field, field.generator()),
                    "trace_zero_count": base.trace_set(0).len(),
                }),
            )?;
            Ok(Status::Ok)
        }

        Command::Unital { command } => match command {
            UnitalCommand::Points { unital: args } => {
                let u = unital(args, g)?;
                let f = u.as_dyn().field();
                ctx.header("unital points", f, json!({ "unital": u.to_json() }))?;
                let set = u.as_dyn().point_set();
                for p in set.points() {
                    ctx.em.emit("point", p.to_json(f))?;
                }
                ctx.em.emit("count", json!({ "points": set.len() }))?;
                Ok(Status::Ok)
            }
            UnitalCommand::Check { unital: args, point } => {
                let u = unital(args, g)?;
                let f = u.as_dyn().field();
                let p = parse_point(f, point)?;
                ctx.header("unital check", f, json!({ "unital": u.to_json() }))?;
                let member = u.as_dyn().contains(&p);
                ctx.em
                    .emit("membership", json!({ "point": p.to_json(f), "on_unital": member }))?;
                Ok(if member { Status::Ok } else { Status::CheckFailed })
            }
            UnitalCommand::Classes { q } => {
                let field = orthogonal_field(*q, g)?;
                let c = classify_unitals(&field)?;
                ctx.header("unital classes", &field, json!({}))?;
                for (i, class) in c.classes.iter().enumerate() {
                    let rep = &class.representative;
                    ctx.em.emit(
                        "class",
                        json!({
                            "index": i,
                            "classical": class.is_classical(),
                            "representative": rep.to_json(),
                            "unit_form": class.unit_form.as_ref().map(|u| u.to_json()),
                            "fengli_form": class.fengli_form.as_ref().map(|u| u.to_json()),
                            "size": class.size,
                            "discriminants": class.discriminants.iter().map(|&d| base_json(field.base(), d)).collect::<Vec<_>>(),
                            "group_order": rep.group_order().ok(),
                        }),
                    )?;
                }
                let expected = known_class_count(*q);
                ctx.em
                    .emit("count", json!({ "classes": c.count(), "expected": expected }))?;
                Ok(if c.matches_known_count() == Some(false) {
                    Status::Violation
                } else {
                    Status::Ok
                })
            }
        },

        Command::Fengli {
            command: FengliCommand::Build { q, a },
        } => {
            let field = orthogonal_field(*q, g)?;
            let a0 = parse_base(field.base(), a)?;
            let input = FengLiInput::with_a(field.clone(), a0)?;
            ctx.header("fengli build", &field, json!({ "unital": input.spec().to_json() }))?;
            let out = fengli_fano(&input)?;
            let mut body = out.to_json(&field);
            body["fano"] = fano_json(&field, &out.fano, input.spec())?;
            ctx.em.emit("fengli", body)?;
            Ok(Status::Ok)
        }

        Command::Onan { command } => {
            let (args, lines, extend) = match command {
                OnanCommand::Verify { unital, lines } => (unital, lines, false),
                OnanCommand::Extend { unital, lines } => (unital, lines, true),
            };
            let u = unital(args, g)?;
            let ud = u.as_dyn();
            let f = ud.field();
            let lines = parse_lines(f, lines)?;
            let name = if extend { "onan extend" } else { "onan verify" };
            ctx.header(name, f, json!({ "unital": u.to_json() }))?;
            let onan = match verify_onan(f, lines, |p| ud.contains(p)) {
                Ok(o) => o,
                Err(failure) => {
                    ctx.em.emit("onan-failure", serde_json::to_value(failure)?)?;
                    return Ok(Status::CheckFailed);
                }
            };
            ctx.em.emit("onan", onan.to_json(f))?;
            if !extend {
                return Ok(Status::Ok);
            }
            let d = diagonal_completion(f, &onan)?;
            ctx.em.emit(
                "diagonal",
                json!({
                    "point": d.point.to_json(f),
                    "diagonals": lines_json(f, &d.diagonals),
                    "on_unital": ud.contains(&d.point),
                }),
            )?;
            match extend_onan_to_fano(f, &onan, |p| ud.contains(p), &ud.special_point())? {
                Some(fano) => {
                    ctx.em.emit("fano", fano_json(f, &fano, ud)?)?;
                    Ok(Status::Ok)
                }
                None => {
                    ctx.em
                        .emit("fano-failure", json!({ "failure": "no-fano-completion" }))?;
                    Ok(Status::CheckFailed)
                }
            }
        }

        Command::Fano { command } => match command {
            FanoCommand::Verify { unital: args, points } => {
                let u = unital(args, g)?;
                let ud = u.as_dyn();
                let f = ud.field();
                let pts: [Point; 7] = parse_list(f, points, parse_point)?;
                ctx.header("fano verify", f, json!({ "unital": u.to_json() }))?;
                match verify_fano(f, &pts, |p| ud.contains(p), &ud.special_point()) {
                    Ok(fano) => {
                        ctx.em.emit("fano", fano_json(f, &fano, ud)?)?;
                        Ok(Status::Ok)
                    }
                    Err(failure) => {
                        ctx.em.emit("fano-failure", serde_json::to_value(failure)?)?;
                        Ok(Status::CheckFailed)
                    }
                }
            }
            FanoCommand::Enumerate { q, a, b } => {
                let field = orthogonal_field(*q, g)?;
                let spec = bm_unital(&field, a, b)?;
                ctx.header("fano enumerate", &field, json!({ "unital": spec.to_json() }))?;
                let e = enumerate_special_fanos(&spec, g.threads)?;
                for (i, (fano, count)) in e.planes.iter().enumerate() {
                    ctx.em.emit(
                        "fano",
                        json!({ "index": i, "descriptions": count, "fano": fano.to_json(&field) }),
                    )?;
                }
                ctx.summary(
                    e.raw_count(),
                    e.dedup_count(),
                    e.multiplicity(),
                    json!({
                        "degenerate_count": e.degenerate_count(),
                        "whole_unital_total": e.whole_unital_total(),
                    }),
                )?;
                Ok(if e.multiplicity().is_none() && !e.planes.is_empty() {
                    Status::Violation
                } else {
                    Status::Ok
                })
            }
            FanoCommand::SearchOrdinary { q, budget, a, b } => {
                let field = orthogonal_field(*q, g)?;
                let spec = match (a, b) {
                    (Some(a), Some(b)) => bm_unital(&field, a, b)?,
                    (None, None) => classify_unitals(&field)?
                        .non_classical()
                        .next()
                        .map(|c| c.representative.clone())
                        .context("no non-classical class")?,
                    _ => bail!(Error::InvalidSpec("give both --a and --b or neither".into())),
                };
                ctx.header(
                    "fano search-ordinary",
                    &field,
                    json!({ "unital": spec.to_json(), "budget": budget }),
                )?;
                let inc = UnitalIncidence::build(&field, &spec.point_set());
                let s = search_ordinary_fanos(&field, &inc, *budget, g.threads)?;
                for (i, fano) in s.planes.iter().enumerate() {
                    ctx.em
                        .emit("fano", json!({ "index": i, "fano": fano.to_json(&field) }))?;
                }
                ctx.summary(
                    s.raw_hits,
                    s.planes.len() as u64,
                    None,
                    json!({
                        "pairs_visited": s.pairs_visited,
                        "pairs_total": s.pairs_total,
                        "exhaustive": s.exhaustive(),
                    }),
                )?;
                Ok(Status::Ok)
            }
        },

        Command::Theorem2 { q } => {
            let field = orthogonal_field(*q, g)?;
            ctx.header("theorem2", &field, json!({}))?;
            let s = compare_special_counts(&field, g.threads)?;
            for e in &s.enumerations {
                ctx.em.emit("enumeration", e.summary_json())?;
            }
            for p in &s.pairs {
                ctx.em.emit("pair", p.to_json(&field))?;
            }
            let first = s.enumerations.first();
            ctx.summary(
                first.map_or(0, |e| e.raw_count()),
                first.map_or(0, |e| e.dedup_count()),
                first.and_then(|e| e.multiplicity()),
                json!({ "unitals": s.enumerations.len(), "holds": s.holds() }),
            )?;
            Ok(if s.holds() { Status::Ok } else { Status::Violation })
        }

        Command::Tits { command } => match command {
            TitsCommand::Point { q, x0, x1, r } => {
                let u = tits_unital(*q, g)?;
                let f = u.field();
                let base = f.base();
                let p = u.point(parse_base(base, x0)?, parse_base(base, x1)?, parse_base(base, r)?);
                ctx.header("tits point", f, json!({ "unital": u.to_json() }))?;
                ctx.em
                    .emit("point", json!({ "point": p.to_json(f), "on_unital": u.contains(&p) }))?;
                Ok(Status::Ok)
            }
            TitsCommand::Check { q, point } => {
                let u = tits_unital(*q, g)?;
                let f = u.field();
                let p = parse_point(f, point)?;
                ctx.header("tits check", f, json!({ "unital": u.to_json() }))?;
                let member = u.contains(&p);
                ctx.em
                    .emit("membership", json!({ "point": p.to_json(f), "on_unital": member }))?;
                Ok(if member { Status::Ok } else { Status::CheckFailed })
            }
            TitsCommand::VerifyExample { q } => {
                degree_of(*q, &TITS_ORDERS)?;
                let ex = worked::tits_example(*q)?;
                ctx.header("tits verify-example", ex.unital.field(), json!({}))?;
                ctx.em.emit("example", ex.to_json())?;
                Ok(if ex.passed() { Status::Ok } else { Status::CheckFailed })
            }
        },

        Command::VerifyPaper { criteria } => {
            let ids: Vec<u8> = if criteria.is_empty() {
                (1..=8).collect()
            } else {
                criteria.clone()
            };
            if let Some(bad) = ids.iter().find(|&&i| !(1..=8).contains(&i)) {
                return Err(Error::InvalidSpec(format!("no criterion {bad}")).into());
            }
            let field = orthogonal_field(4, g)?;
            ctx.header("verify-paper", &field, json!({ "criteria": ids }))?;
            let mut failed = 0;
            for id in ids {
                let o = suite::run(id, g.threads);
                eprintln!("{}", o.line());
                failed += usize::from(!o.passed);
                ctx.em.emit("criterion", o.to_json())?;
            }
            let mut body = json!({ "failed": failed });
            if !g.no_timing {
                body["wall_time"] = json!(ctx.start.elapsed().as_secs_f64());
            }
            ctx.em.emit("summary", body)?;
            Ok(if failed == 0 { Status::Ok } else { Status::CheckFailed })
        }
    }
}

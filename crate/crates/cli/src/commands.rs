//! Dispatch from parsed arguments to library calls, producing reports.

use std::path::Path;

use ccalg::conformal::{check_associativity, check_bimodule};
use ccalg::deform::{self, DeformationSeries, RigidityStatus};
use ccalg::hochschild::is_two_cocycle;
use ccalg::io::{parse_bundle, NamedMap, Space, Workspace};
use ccalg::multilinear::tuples;
use ccalg::trb::{self, PerturbMode, Route};
use ccalg::{linf, Cochain, CheckReport, Frame, LambdaExpr};

use crate::report::{Check, Report};
use crate::{Command, DeformCommand, Induced, ModeArg, RouteArg};

pub enum Fail {
    /// Malformed input or a request that does not fit the data.
    Input(String),
    /// A mathematical precondition failed.
    Math(String),
}

impl From<ccalg::Error> for Fail {
    fn from(e: ccalg::Error) -> Self {
        use ccalg::Error::*;
        match e {
            NotTrb(_) | NotInvertible(_) | NotCocycle(_) | NotAssociative(_) => Fail::Math(e.to_string()),
            other => Fail::Input(other.to_string()),
        }
    }
}

type CResult<T> = Result<T, Fail>;

pub fn load(path: &Path) -> CResult<Workspace> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))?;
    parse_bundle(&text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

fn t_names(f: &Frame) -> Vec<String> {
    f.algebra.basis_names().to_vec()
}

fn u_names(f: &Frame) -> Vec<String> {
    f.bimodule.basis_names().to_vec()
}

/// Associativity, bimodule axioms and the cocycle condition.
pub fn validation(ws: &Workspace, rep: &mut Report) -> CResult<()> {
    let f = &ws.frame;
    rep.check(&check_associativity(&f.algebra), &t_names(f));
    rep.check(&check_bimodule(&f.algebra, &f.bimodule), &u_names(f));
    rep.check(&is_two_cocycle(&f.algebra, &f.bimodule, &f.cocycle)?, &u_names(f));
    Ok(())
}

fn operator(ws: &Workspace, name: Option<&str>) -> CResult<(String, Cochain)> {
    let name = match name {
        Some(n) => n.to_string(),
        None if ws.operators.contains_key("R") => "R".to_string(),
        None if ws.operators.len() == 1 => ws.operators.keys().next().cloned().unwrap_or_default(),
        None => return Err(Fail::Input("several operators in the bundle; choose one with --op".into())),
    };
    u_cochain(ws, &name).map(|c| (name, c))
}

/// An operator, or a named map `U^n → T`.
fn u_cochain(ws: &Workspace, name: &str) -> CResult<Cochain> {
    if let Some(r) = ws.operators.get(name) {
        return Ok(r.clone());
    }
    match ws.maps.get(name) {
        Some(m) if m.from == Space::U && m.to == Space::T => Ok(m.cochain.clone()),
        Some(_) => Err(Fail::Input(format!("map {name} does not go from U to T"))),
        None => Err(Fail::Input(format!("no operator or map named {name}"))),
    }
}

fn t_to_u(ws: &Workspace, name: &str) -> CResult<Cochain> {
    match ws.maps.get(name) {
        Some(m) if m.from == Space::T && m.to == Space::U && m.cochain.arity() == 1 => Ok(m.cochain.clone()),
        Some(_) => Err(Fail::Input(format!("map {name} is not a 1-cochain from T to U"))),
        None => Err(Fail::Input(format!("no map named {name}"))),
    }
}

fn element(ws: &Workspace, name: &str) -> CResult<LambdaExpr> {
    ws.elements.get(name).cloned().ok_or_else(|| Fail::Input(format!("no element named {name}")))
}

/// `name(a1, a2) = value` for every nonzero entry.
fn table_lines(name: &str, c: &Cochain, args: &[String], out: &[String]) -> Vec<String> {
    if c.arity() == 0 {
        return vec![format!("{name} = {}", c.entry(&[]).display_with(out))];
    }
    let lines: Vec<String> = tuples(c.map().in_ranks())
        .into_iter()
        .filter(|t| !c.entry(t).is_zero())
        .map(|t| {
            let a: Vec<&str> = t.iter().map(|&i| args[i].as_str()).collect();
            format!("{name}({}) = {}", a.join(", "), c.entry(&t).display_with(out))
        })
        .collect();
    if lines.is_empty() {
        vec![format!("{name} = 0")]
    } else {
        lines
    }
}

fn zero_check(name: &str, c: &Cochain) -> CheckReport {
    let mut rep = CheckReport::new(name);
    for t in tuples(c.map().in_ranks()) {
        rep.record(name, &t, c.entry(&t).clone());
    }
    rep
}

fn with_u_map(ws: &Workspace, name: &str, c: Cochain) -> Workspace {
    let mut out = ws.clone();
    out.maps.insert(name.to_string(), NamedMap { from: Space::U, to: Space::T, cochain: c });
    out
}

fn u_value(rep: &mut Report, ws: &Workspace, name: &str, c: Cochain) {
    let f = &ws.frame;
    rep.lines.extend(table_lines(name, &c, &u_names(f), &t_names(f)));
    rep.fact("is_zero", c.is_zero());
    rep.value = Some(with_u_map(ws, name, c));
}

pub fn run(cmd: &Command, ws: &Workspace, rep: &mut Report) -> CResult<()> {
    let f = &ws.frame;
    let (tn, un) = (t_names(f), u_names(f));
    match cmd {
        Command::Validate { .. } => {
            validation(ws, rep)?;
            rep.value = Some(ws.clone());
        }
        Command::CheckTrb { op, .. } => {
            let (name, r) = operator(ws, op.op.as_deref())?;
            rep.fact("operator", name);
            rep.check(&trb::check_trb(f, &r)?, &tn);
        }
        Command::GraphCheck { op, .. } => {
            let (name, r) = operator(ws, op.op.as_deref())?;
            rep.fact("operator", name);
            rep.check(&trb::graph_check(f, &r)?, &tn);
        }
        Command::Induce { what, op, .. } => {
            let (_, r) = operator(ws, op.op.as_deref())?;
            let star = trb::induced_product(f, &r)?;
            let bim = trb::induced_bimodule(f, &r)?;
            rep.check(&check_associativity(&star), &un);
            rep.check(&check_bimodule(&star, &bim), &tn);
            match what {
                Induced::Product => {
                    let c = Cochain::from_map(f.u_rank(), star.product().clone())?;
                    rep.lines.extend(table_lines("*", &c, &un, &un));
                }
                Induced::Bimodule => {
                    rep.lines.extend(mixed_lines("l", bim.left(), &[&un, &tn], &tn));
                    rep.lines.extend(mixed_lines("r", bim.right(), &[&tn, &un], &tn));
                }
            }
            let mut out = Workspace::new(Frame::untwisted(star, bim)?);
            out.options = ws.options.clone();
            rep.value = Some(out);
        }
        Command::TwistedDelta { op, map, .. } => {
            let (_, r) = operator(ws, op.op.as_deref())?;
            let g = u_cochain(ws, map)?;
            u_value(rep, ws, &format!("delta_{map}"), trb::twisted_delta(f, &r, &g)?);
        }
        Command::Dr { op, map, .. } => {
            let (_, r) = operator(ws, op.op.as_deref())?;
            let g = u_cochain(ws, map)?;
            u_value(rep, ws, &format!("dR_{map}"), linf::d_r(f, &r, &g)?);
        }
        Command::Cohomology { op, degree, trunc, route, .. } => {
            let (_, r) = operator(ws, op.op.as_deref())?;
            let n = degree.or(ws.options.degree).unwrap_or(1);
            let d = trunc.or(ws.options.truncation).unwrap_or(1);
            let route = match route {
                RouteArg::Delta => Route::TwistedDelta,
                RouteArg::Brackets => Route::DerivedBrackets,
            };
            let c = trb::cohomology(f, &r, n, d, route)?;
            rep.fact("degree", c.degree);
            rep.fact("truncation", c.truncation);
            rep.fact("dim_cochains", c.dim_cochains);
            rep.fact("dim_cocycles", c.dim_cocycles);
            rep.fact("dim_coboundaries_in_window", c.dim_coboundaries_in_window);
            rep.fact("dim_quotient", c.dim_quotient);
            rep.fact("growth", c.growth);
            rep.fact("stabilized", c.stabilized);
        }
        Command::TwistCoboundary { map, .. } => {
            let h = t_to_u(ws, map)?;
            let (h2, iso) = trb::twist_by_coboundary(f, &h)?;
            let mut names = tn.clone();
            names.extend(un.iter().cloned());
            rep.check(&iso, &names);
            rep.check(&is_two_cocycle(&f.algebra, &f.bimodule, &h2)?, &un);
            rep.lines.extend(table_lines("H'", &h2, &tn, &un));
            let mut out = ws.clone();
            out.frame = f.with_cocycle(h2)?;
            rep.value = Some(out);
        }
        Command::Perturb { op, map, mode, .. } => {
            let (name, r) = operator(ws, op.op.as_deref())?;
            let h = t_to_u(ws, map)?;
            let mode = match mode {
                ModeArg::Admissible => PerturbMode::Admissible,
                ModeArg::Twist => PerturbMode::Twist,
            };
            let p = trb::perturb_graph(f, &r, &h, mode)?;
            rep.check(&p.verified, &tn);
            if mode == PerturbMode::Admissible {
                rep.check(&trb::induced_iso_check(f, &r, &h)?, &un);
            }
            let new_name = format!("{name}'");
            rep.lines.extend(table_lines(&new_name, &p.operator, &un, &tn));
            if mode == PerturbMode::Twist {
                rep.lines.extend(table_lines("H'", &p.cocycle, &tn, &un));
            }
            let mut out = ws.clone();
            out.frame = f.with_cocycle(p.cocycle)?;
            out.operators.insert(new_name, p.operator);
            rep.value = Some(out);
        }
        Command::FromInverse { map, name, .. } => {
            let h = t_to_u(ws, map)?;
            let (r, h2) = trb::from_invertible_onecochain(f, &h)?;
            let frame = f.with_cocycle(h2.clone())?;
            rep.check(&trb::check_trb(&frame, &r)?, &tn);
            rep.lines.extend(table_lines(name, &r, &un, &tn));
            rep.lines.extend(table_lines("H", &h2, &tn, &un));
            let mut out = ws.clone();
            out.frame = frame;
            out.operators.insert(name.clone(), r);
            rep.value = Some(out);
        }
        Command::Bracket { binary, ternary, .. } => {
            let c = match (binary, ternary) {
                (Some(b), None) => linf::derived_bracket(f, &u_cochain(ws, &b[0])?, &u_cochain(ws, &b[1])?)?,
                (None, Some(t)) => {
                    linf::ternary_bracket(f, &u_cochain(ws, &t[0])?, &u_cochain(ws, &t[1])?, &u_cochain(ws, &t[2])?)?
                }
                _ => return Err(Fail::Input("give exactly one of --binary A B or --ternary A B C".into())),
            };
            u_value(rep, ws, "bracket", c);
        }
        Command::McResidual { op, .. } => {
            let (_, r) = operator(ws, op.op.as_deref())?;
            let mc = linf::mc_residual(f, &r)?;
            rep.check(&zero_check("Maurer-Cartan equation", &mc), &tn);
            u_value(rep, ws, "mc", mc);
        }
        Command::Deform(d) => run_deform(d, ws, rep)?,
        Command::Nijenhuis { op, element: p, .. } => {
            let (_, r) = operator(ws, op.op.as_deref())?;
            let reps = deform::is_nijenhuis(f, &r, &element(ws, p)?)?;
            let spaces = [&tn, &tn, &un, &un, &tn];
            for (c, names) in reps.iter().zip(spaces) {
                rep.check(c, names);
            }
        }
        Command::Rigidity { op, trunc, .. } => {
            let (_, r) = operator(ws, op.op.as_deref())?;
            let d = trunc.or(ws.options.truncation).unwrap_or(1);
            let w = deform::rigidity_witness(f, &r, d)?;
            rep.fact("truncation", d);
            rep.fact("cocycles", w.entries.len());
            for (i, e) in w.entries.iter().enumerate() {
                let label = format!("z{}", i + 1);
                rep.lines.extend(table_lines(&label, &e.cocycle, &un, &tn));
                rep.line(match &e.status {
                    RigidityStatus::SolvedNijenhuis(p) => format!("{label}: d_R(p) = {label} with Nijenhuis p = {}", p.display_with(&tn)),
                    RigidityStatus::SolvedNotNijenhuis(p) => {
                        format!("{label}: d_R(p) = {label} with p = {} (not Nijenhuis)", p.display_with(&tn))
                    }
                    RigidityStatus::Unsolved => format!("{label}: no preimage of degree <= {d}"),
                });
            }
            rep.checks.push(Check::flag(format!("rigidity witnessed at degree {d}"), w.witnessed()));
        }
    }
    Ok(())
}

fn mixed_lines(name: &str, map: &ccalg::StructureMap, args: &[&Vec<String>], out: &[String]) -> Vec<String> {
    if map.is_zero() {
        return vec![format!("{name} = 0")];
    }
    tuples(map.in_ranks())
        .into_iter()
        .filter(|t| !map.entry(t).is_zero())
        .map(|t| {
            let a: Vec<&str> = t.iter().zip(args).map(|(&i, names)| names[i].as_str()).collect();
            format!("{name}({}) = {}", a.join(", "), map.entry(&t).display_with(out))
        })
        .collect()
}

fn run_deform(cmd: &DeformCommand, ws: &Workspace, rep: &mut Report) -> CResult<()> {
    let f = &ws.frame;
    let (tn, un) = (t_names(f), u_names(f));
    match cmd {
        DeformCommand::Linear { op, r1, .. } => {
            let (_, r) = operator(ws, op.op.as_deref())?;
            let r1 = u_cochain(ws, r1)?;
            let reps = deform::check_linear_deformation(f, &r, &r1)?;
            for c in &reps {
                rep.check(c, &tn);
            }
            let cocycle = deform::is_one_cocycle(f, &r, &r1)?;
            rep.fact("infinitesimal_is_cocycle", cocycle);
        }
        DeformCommand::Formal { series, order, .. } => {
            let name = match series {
                Some(s) => s.clone(),
                None if ws.series.len() == 1 => ws.series.keys().next().cloned().unwrap_or_default(),
                None => return Err(Fail::Input("choose a series with --series".into())),
            };
            let terms = ws.series.get(&name).ok_or_else(|| Fail::Input(format!("no series named {name}")))?;
            let ops = terms.iter().map(|t| u_cochain(ws, t)).collect::<CResult<Vec<_>>>()?;
            let s = DeformationSeries::new(ops)?;
            let n = order.unwrap_or(s.order());
            for c in deform::check_formal_deformation(f, &s, n)? {
                rep.check(&c, &tn);
            }
        }
        DeformCommand::Equiv { op, r1, r1p, element: p, .. } => {
            let (_, r) = operator(ws, op.op.as_deref())?;
            let res = deform::check_linear_equivalence(f, &r, &u_cochain(ws, r1)?, &u_cochain(ws, r1p)?, &element(ws, p)?)?;
            let spaces = [&tn, &un, &un, &tn];
            for (c, names) in res.conditions.iter().zip(spaces) {
                rep.check(c, names);
            }
            if let Some(ok) = res.difference_is_dr {
                rep.checks.push(Check::flag("R1 - R1' = d_R(p)", ok));
            }
        }
    }
    Ok(())
}

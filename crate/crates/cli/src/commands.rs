use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use perron_core::arith::parse_rat;
use perron_core::conebuild::{witnesses_resubstitute, ConeMode};
use perron_core::lattice::{build_lattice_with_basis, check_basis, optimize_alpha, parse_basis};
use perron_core::matana::{
    add_identity, certify_spectral_radius, charpoly_exact, is_irreducible, period_and_primitivity, to_edge_shift,
};
use perron_core::numfield::DEFAULT_PRECISION;
use perron_core::pipeline::{construct, primitive_upgrade, Construction};
use perron_core::semigrp::action_matches;
use perron_core::{
    brute_force_dpf, build_field_context, theorem_bounds, AlphaPolicy, AlphaWeights, BoundReport, ConstructOptions,
    Error, FieldContext, FieldOptions, IntPolynomial, SearchMode, SearchOptions,
};
use serde_json::json;

use crate::args::{AnalyzeArgs, BoundArgs, ConstructArgs, FieldArgs, LatticeArgs, ModeArg, SearchArgs, SearchModeArg, VerifyArgs};
use crate::artifacts::{
    int_rows, parse_int_rows, parse_rat_rows, rat_rows, read_json, write_atomic, write_json, ActionDoc, CertificateDoc,
    FieldSummary, SpectralDoc, CERTIFICATE_FORMAT,
};
use crate::exit::CliError;

fn field_options(args: &FieldArgs) -> FieldOptions {
    FieldOptions {
        precision: DEFAULT_PRECISION.min(args.precision),
        ceiling: args.precision,
        assume_irreducible: args.assume_irreducible,
    }
}

/// Parses and certifies the input. Degree 4 and up needs
/// `--assume-irreducible`, since the built-in gate only rules out repeated
/// and rational roots.
pub fn load_field(args: &FieldArgs) -> Result<FieldContext, CliError> {
    let p = IntPolynomial::parse(&args.poly)?;
    field_from_poly(&p, args.assume_irreducible, args.precision)
}

fn field_from_poly(p: &IntPolynomial, assume_irreducible: bool, precision: u32) -> Result<FieldContext, CliError> {
    if p.degree() >= 4 && !assume_irreducible {
        return Err(Error::NotIrreducible(format!(
            "{p}: irreducibility is only decided for degree <= 3; pass --assume-irreducible"
        ))
        .into());
    }
    let opts = FieldOptions {
        precision: DEFAULT_PRECISION.min(precision),
        ceiling: precision,
        assume_irreducible,
    };
    Ok(build_field_context(p, &opts)?)
}

fn read_basis(path: Option<&Path>) -> Result<Option<Vec<Vec<num_rational::BigRational>>>, CliError> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            Ok(Some(parse_basis(&text)?))
        }
    }
}

fn alpha_for(ctx: &FieldContext, policy: AlphaPolicy) -> Result<AlphaWeights, CliError> {
    let ones = AlphaWeights::ones(ctx.places());
    Ok(match policy {
        AlphaPolicy::Ones => ones,
        AlphaPolicy::Optimize(iters) => optimize_alpha(ctx, &ones, iters)?,
    })
}

pub fn analyze(args: &AnalyzeArgs) -> Result<String, CliError> {
    let ctx = load_field(&args.field)?;
    let summary = FieldSummary::of(&ctx);
    let doc = json!({ "seed": args.field.seed, "field": summary });
    if let Some(dir) = &args.out_dir {
        write_json(dir, "analysis.json", &doc)?;
    }
    if args.field.json {
        return Ok(pretty(&doc));
    }
    let mut s = String::new();
    let _ = writeln!(s, "polynomial     {}", ctx.poly);
    let _ = writeln!(s, "degree         {} (r = {}, s = {})", ctx.degree(), ctx.r, ctx.s);
    let width = perron_core::arith::rat_to_f64_up(&(&ctx.lambda.hi - &ctx.lambda.lo));
    let _ = writeln!(s, "lambda         {:.15} (certified interval width {width:.1e})", ctx.lambda_f64());
    let _ = writeln!(s, "rho            [{:.12}, {:.12}]", ctx.rho.lo, ctx.rho.hi);
    let _ = writeln!(s, "discriminant   {}", ctx.disc);
    let _ = writeln!(s, "pisot          {}", ctx.is_pisot());
    if ctx.degree() == 1 {
        let _ = writeln!(s, "note           degree 1: lambda is an integer, the 1x1 matrix [lambda] realizes it");
    }
    Ok(s)
}

pub fn bound(args: &BoundArgs) -> Result<String, CliError> {
    let ctx = load_field(&args.field)?;
    let report = bound_report(&ctx, &args.lattice)?;
    let doc = json!({ "seed": args.field.seed, "field": FieldSummary::of(&ctx), "bounds": report });
    if let Some(dir) = &args.out_dir {
        write_json(dir, "bound.json", &doc)?;
    }
    if args.field.json {
        return Ok(pretty(&doc));
    }
    Ok(render_bounds(&report))
}

fn bound_report(ctx: &FieldContext, lattice: &LatticeArgs) -> Result<BoundReport, CliError> {
    let policy: AlphaPolicy = lattice.alpha.parse()?;
    let alpha = alpha_for(ctx, policy)?;
    let basis = read_basis(lattice.basis_file.as_deref())?;
    let lat = build_lattice_with_basis(ctx, &alpha, basis)?;
    Ok(theorem_bounds(&lat))
}

fn render_bounds(r: &BoundReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "degree            {}", r.d);
    let _ = writeln!(s, "lattice           {}", r.lattice_label);
    let _ = writeln!(s, "rho (upper)       {:.12}", r.rho_upper);
    let _ = writeln!(s, "|disc|            {}", r.disc_abs);
    let _ = writeln!(s, "tau               {:.6}", r.tau_used);
    let banaszczyk = r.d as f64 / 4.0 * perron_core::arith::big_to_f64(&r.disc_abs).powf(1.0 / r.d as f64);
    let _ = writeln!(
        s,
        "banaszczyk        tau <= (d/4)|disc|^(1/d) = {banaszczyk:.6}: {}",
        r.tau_within_banaszczyk
    );
    let _ = writeln!(s, "bound (tau)       {}", r.bound_tau.to_scientific());
    let _ = writeln!(s, "bound (disc)      {}", r.bound_disc.to_scientific());
    let _ = writeln!(s, "primitive bound   {} (kappa term {})", r.primitive_bound.to_scientific(), r.kappa_status);
    if let Some(n) = r.quadratic_dimension {
        let _ = writeln!(s, "quadratic         d_PF = {n}");
    }
    if let Some(p) = &r.pisot {
        let _ = writeln!(
            s,
            "pisot             rho < 1/p (plastic): {}; 1/(1-rho) = {:.6} < {:.4}",
            p.rho_below_inverse_plastic, p.gap_factor, p.gap_limit
        );
    }
    s
}

pub fn search(args: &SearchArgs) -> Result<String, CliError> {
    let ctx = load_field(&args.field)?;
    let mode = match args.mode {
        SearchModeArg::Primitive => SearchMode::Primitive,
        SearchModeArg::Irreducible => SearchMode::Irreducible,
    };
    let mut opts = SearchOptions::new(mode);
    opts.n_max = args.n_max;
    opts.budget = args.budget;
    let result = brute_force_dpf(&ctx, &opts)?;
    let doc = json!({ "seed": args.field.seed, "field": FieldSummary::of(&ctx), "search": result });
    if let Some(dir) = &args.out_dir {
        write_json(dir, "search.json", &doc)?;
    }
    if args.field.json {
        return Ok(pretty(&doc));
    }
    let name = match mode {
        SearchMode::Primitive => "d_PF",
        SearchMode::Irreducible => "d_PF^irr",
    };
    let mut s = String::new();
    match (&result.n_found, &result.witness) {
        (Some(n), Some(w)) => {
            let _ = writeln!(s, "{name} = {n}");
            let _ = writeln!(s, "witness {}", serde_json::to_string(&w.string_entries()).unwrap_or_default());
        }
        _ => {
            let _ = writeln!(s, "{name} > {} (dimensions {:?} exhausted)", opts.n_max, result.exhausted);
        }
    }
    let _ = writeln!(
        s,
        "nodes {} leaves {} pruned {}",
        result.stats.nodes, result.stats.leaves, result.stats.pruned
    );
    Ok(s)
}

pub fn construct_cmd(args: &ConstructArgs) -> Result<String, CliError> {
    let fopts = field_options(&args.field);
    let ctx = load_field(&args.field)?;
    let opts = ConstructOptions {
        mode: match args.mode {
            ModeArg::PaperExact => ConeMode::PaperExact,
            ModeArg::Adaptive => ConeMode::Adaptive,
        },
        alpha: args.lattice.alpha.parse()?,
        shrink_floor: args.shrink_floor,
        shrink_steps: args.shrink_steps,
        budget: args.budget,
        basis: read_basis(args.lattice.basis_file.as_deref())?,
    };
    let result = if args.primitive {
        primitive_upgrade(&ctx, &fopts, &opts).map(|up| Built {
            matrix: up.matrix,
            certificate: up.certificate,
            period: up.period,
            acting: up.shifted,
            run: up.inner,
            identity_added: true,
        })
    } else {
        construct(&ctx, &opts).map(|run| Built {
            matrix: run.matrix.clone(),
            certificate: run.certificate.clone(),
            period: run.period,
            acting: ctx.clone(),
            run,
            identity_added: false,
        })
    };
    let built = match result {
        Ok(b) => b,
        Err(e) => {
            let err = CliError::from(e);
            let _ = write_json(&args.out_dir, "error.json", &err.diagnostic());
            return Err(err);
        }
    };
    let dir = &args.out_dir;
    let cert = certificate_doc(args, &ctx, &built);
    let report = report_doc(args, &ctx, &built);
    let graph = to_edge_shift(&built.matrix)?;
    write_json(dir, "matrix.json", &built.matrix)?;
    write_json(dir, "certificate.json", &cert)?;
    write_atomic(dir, "graph.dot", graph.to_dot(args.expand_edges).as_bytes())?;
    write_json(dir, "report.json", &report)?;
    if args.field.json {
        return Ok(pretty(&report));
    }
    let mut s = String::new();
    let _ = writeln!(s, "polynomial      {}", ctx.poly);
    let _ = writeln!(s, "lattice         {}", built.run.lattice.label);
    let _ = writeln!(
        s,
        "cone            {} generators, shrink {}",
        built.run.cone.generators.len(),
        built.run.cone.spec.shrink
    );
    let _ = writeln!(
        s,
        "semigroup       {} points in C, {} generators",
        built.run.generators.enumerated,
        built.run.generators.len()
    );
    let _ = writeln!(s, "matrix          {0}x{0} ({1})", built.matrix.dim(), if built.period.primitive { "primitive" } else { "irreducible" });
    let _ = writeln!(s, "charpoly        {}", built.certificate.charpoly);
    let _ = writeln!(s, "certified       spectral radius = lambda ({})", built.certificate.method);
    let _ = writeln!(s, "bound (disc)    {}", built.run.bounds.bound_disc.to_scientific());
    let _ = writeln!(s, "written to      {}", dir.display());
    Ok(s)
}

struct Built {
    matrix: perron_core::NonNegIntMatrix,
    certificate: perron_core::SpectralCertificate,
    period: perron_core::Period,
    /// Field of the number whose action was assembled.
    acting: FieldContext,
    run: Construction,
    identity_added: bool,
}

fn certificate_doc(args: &ConstructArgs, ctx: &FieldContext, b: &Built) -> CertificateDoc {
    let run = &b.run;
    CertificateDoc {
        format: CERTIFICATE_FORMAT.into(),
        seed: args.field.seed,
        poly: ctx.poly.clone(),
        assume_irreducible: args.field.assume_irreducible,
        precision_ceiling: args.field.precision,
        lambda: crate::artifacts::interval_strings(&ctx.lambda),
        matrix: b.matrix.clone(),
        period: b.period.period,
        primitive: b.period.primitive,
        spectral: SpectralDoc::of(&b.certificate),
        action: ActionDoc {
            poly: b.acting.poly.clone(),
            lattice_label: run.lattice.label.to_string(),
            basis_rows: rat_rows(&run.lattice.basis_rows),
            mult_matrix: int_rows(&run.lattice.mult_matrix),
            cone_generators: int_rows(&run.cone.generators),
            invariance_witnesses: rat_rows(&run.cone.witnesses),
            semigroup_generators: int_rows(&run.generators.gens),
            full_matrix: run.full_matrix.clone(),
            component: run.component.clone(),
            identity_added: b.identity_added,
        },
    }
}

fn report_doc(args: &ConstructArgs, ctx: &FieldContext, b: &Built) -> serde_json::Value {
    let run = &b.run;
    let spec = &run.cone.spec;
    let dim = b.matrix.dim();
    let bound_note = format!(
        "the closed-form bound is {} for this input; paper_exact enumeration of C can be far beyond desk scale, adaptive mode is the supported construction path",
        run.bounds.bound_disc.to_scientific()
    );
    json!({
        "config": {
            "poly": ctx.poly,
            "mode": spec.mode,
            "alpha_policy": args.lattice.alpha,
            "shrink_floor": args.shrink_floor,
            "shrink_steps": args.shrink_steps,
            "budget": args.budget,
            "precision_ceiling": args.field.precision,
            "basis_file": args.lattice.basis_file.as_ref().map(|p| p.display().to_string()),
            "assume_irreducible": args.field.assume_irreducible,
            "primitive": args.primitive,
            "seed": args.field.seed,
        },
        "field": FieldSummary::of(ctx),
        "acting_poly": b.acting.poly,
        "lattice": {
            "label": run.lattice.label.to_string(),
            "alpha": run.lattice.alpha.weights,
            "ell_hat": run.lattice.ell_hat,
            "det_qalpha": run.lattice.det_qalpha,
            "det_expected": run.lattice.det_expected,
            "disc": run.lattice.disc.to_string(),
            "thickness": run.lattice.thickness(),
        },
        "cone": {
            "spec": spec,
            "generators": run.cone.generators.len(),
            "max_rounding_distance": run.cone.distances.iter().cloned().fold(0.0, f64::max),
            "attempts": run.cone.attempts,
        },
        "semigroup": {
            "enumerated": run.generators.enumerated,
            "generators": run.generators.len(),
        },
        "matrix": {
            "dimension": dim,
            "full_dimension": run.full_matrix.dim(),
            "component": run.component,
            "identity_added": b.identity_added,
            "period": b.period.period,
            "primitive": b.period.primitive,
            "trace": b.matrix.trace().to_string(),
        },
        "certificate": SpectralDoc::of(&b.certificate),
        "bounds": run.bounds,
        "dimension_within_bound_disc": run.within_bound,
        "notes": [bound_note],
    })
}

/// Re-checks a construction from `certificate.json` and `matrix.json`.
pub fn verify(args: &VerifyArgs) -> Result<String, CliError> {
    let doc: CertificateDoc = read_json(&args.out_dir, "certificate.json")?;
    let matrix: perron_core::NonNegIntMatrix = read_json(&args.out_dir, "matrix.json")?;
    let checks = verify_doc(&doc, &matrix);
    let failed: Vec<String> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()).collect();
    if !failed.is_empty() {
        return Err(CliError::Verify(failed));
    }
    if args.json {
        let names: Vec<&String> = checks.iter().map(|(n, _)| n).collect();
        return Ok(pretty(&json!({ "verified": true, "checks": names })));
    }
    let mut s = String::new();
    for (name, _) in &checks {
        let _ = writeln!(s, "ok  {name}");
    }
    let _ = writeln!(s, "certificate verified");
    Ok(s)
}

/// Named checks and their outcomes.
pub fn verify_doc(doc: &CertificateDoc, matrix: &perron_core::NonNegIntMatrix) -> Vec<(String, bool)> {
    let mut out: Vec<(String, bool)> = Vec::new();
    let mut check = |name: &str, ok: bool| out.push((name.to_string(), ok));
    check("format", doc.format == CERTIFICATE_FORMAT);
    check("matrix file matches certificate", *matrix == doc.matrix);
    check("irreducible", is_irreducible(matrix));
    let chi = charpoly_exact(matrix);
    check("characteristic polynomial", chi == doc.spectral.charpoly);
    let quotient = chi.div_exact(&doc.poly);
    check("divisible by minimal polynomial", quotient.as_ref() == Some(&doc.spectral.quotient));
    let period = period_and_primitivity(matrix);
    check("period", period.period == doc.period && period.primitive == doc.primitive);

    match field_from_poly(&doc.poly, doc.assume_irreducible, doc.precision_ceiling) {
        Ok(ctx) => {
            let lambda_ok = doc
                .lambda
                .iter()
                .map(|x| parse_rat(x))
                .collect::<Option<Vec<_>>>()
                .is_some_and(|v| v[0] <= ctx.lambda.hi && ctx.lambda.lo <= v[1]);
            check("lambda interval", lambda_ok);
            let cert = certify_spectral_radius(&ctx, matrix);
            check("spectral radius is lambda", cert.as_ref().is_ok_and(|c| c.matches_lambda));
            if let Ok(c) = cert {
                check(
                    "radius interval width below 1e-8",
                    perron_core::arith::rat_to_f64_up(&(&c.radius_interval.hi - &c.radius_interval.lo)) < 1e-8,
                );
            }
        }
        Err(_) => check("minimal polynomial certifies as Perron", false),
    }

    let a = &doc.action;
    let parsed = (|| -> Result<_, String> {
        Ok((
            parse_rat_rows(&a.basis_rows)?,
            parse_int_rows(&a.mult_matrix)?,
            parse_int_rows(&a.cone_generators)?,
            parse_rat_rows(&a.invariance_witnesses)?,
            parse_int_rows(&a.semigroup_generators)?,
        ))
    })();
    let Ok((basis, mult, cone, witnesses, gens)) = parsed else {
        check("action data parses", false);
        return out;
    };
    let acting = field_from_poly(&a.poly, true, doc.precision_ceiling);
    let mult_ok = acting.as_ref().is_ok_and(|ctx| check_basis(ctx, &basis).is_ok_and(|m| m == mult));
    check("multiplication matrix matches basis", mult_ok);
    let shift_ok = if a.identity_added {
        a.poly == doc.poly.taylor_shift(&BigInt::one())
    } else {
        a.poly == doc.poly
    };
    check("acting polynomial", shift_ok);
    check("cone invariance witnesses", witnesses_resubstitute(&mult, &cone, &witnesses));
    let in_cone = |v: &Vec<BigInt>| -> bool {
        let gen_rows: Vec<Vec<BigInt>> = cone.clone();
        perron_core::lp::cone_combination(&gen_rows, v).is_some()
    };
    check("semigroup generators lie in the cone", gens.iter().all(|g| !g.iter().all(Zero::is_zero) && in_cone(g)));
    check("matrix records the action", action_matches(&mult, &gens, &a.full_matrix));
    let comp_ok = a.component.iter().all(|&i| i < a.full_matrix.dim()) && {
        let sub = a.full_matrix.principal(&a.component);
        let expected = if a.identity_added { add_identity(&sub) } else { sub };
        expected == *matrix
    };
    check("matrix is the recorded component", comp_ok);
    check(
        "non-negative entries",
        matrix.entries().iter().flatten().all(|x| !x.is_negative()),
    );
    out
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}

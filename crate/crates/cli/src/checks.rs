//! The scenario checks. Each returns a [`CheckResult`]; numerical errors
//! become failures, never panics.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use hopf_core::duality::{
    biduality_spot_check, sample_variety, singular_locus_probe, tube_duality_check,
    BidualityOutcome, IncidencePair,
};
use hopf_core::hypersurface::{
    lemma4_residuals, miquel_check, structure_tensors, Chart, HypersurfacePatch, MiquelOutcome,
    NormalOrientation,
};
use hopf_core::space_forms::ModelPoint;
use hopf_core::tubes::{
    expand_spectrum, focal_cell_sweep, focal_radii, rank_sweep, singular_blowup_probe,
    ApproachCurve, BaseSubmanifold, FocalSource, HypersurfaceBase, TubeSpec,
};
use serde_json::{json, Value};

use crate::report::{list, num, opt, CheckResult, Table};
use crate::scenario::{BidualityExpectation, BlowupExpectation, CheckKind, Scenario};

pub fn run_check(s: &Scenario, kind: CheckKind) -> CheckResult {
    let mut res = CheckResult::new(kind.name());
    let outcome = match kind {
        CheckKind::Spectrum => spectrum(s, &mut res),
        CheckKind::Hopf => hopf(s, &mut res),
        CheckKind::Lemma4 => lemma4(s, &mut res),
        CheckKind::Structure => structure(s, &mut res),
        CheckKind::Miquel => miquel(s, &mut res),
        CheckKind::Focal => focal(s, &mut res),
        CheckKind::RankSweep => rank_table(s, &mut res),
        CheckKind::Duality => duality(s, &mut res),
        CheckKind::Blowup => blowup(s, &mut res),
        CheckKind::SingularLocus => singular_locus(s, &mut res),
    };
    if let Err(e) = outcome {
        res.fail(format!("error: {e}"));
    }
    res
}

type Outcome = Result<(), String>;

fn patch(s: &Scenario) -> Result<HypersurfacePatch, String> {
    let chart = s
        .object
        .chart(s.space)
        .ok_or("object has no hypersurface chart")?;
    let orientation = s.object.orientation().unwrap_or(NormalOrientation::Inward);
    HypersurfacePatch::new(chart, orientation)
        .map(|p| p.with_fd_step(s.fd_step))
        .map_err(|e| e.to_string())
}

fn tube(s: &Scenario) -> Result<TubeSpec, String> {
    s.object
        .tube(s.space)
        .ok_or_else(|| "object is not a tube".to_string())
}

fn points(s: &Scenario, p: &HypersurfacePatch) -> Result<Vec<Vec<f64>>, String> {
    p.grid(&s.grid).map_err(|e| e.to_string())
}

fn max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Closed-form spectrum for the scenario's orientation at a chart point.
fn prediction(s: &Scenario, u: &[f64]) -> Option<Vec<f64>> {
    let tube = s.object.tube(s.space)?;
    let nb = tube.base().base_domain().len();
    let model = tube.model(&u[..nb]).ok()??;
    let mut pred = expand_spectrum(&model.predicted(tube.radius()).ok()?);
    if s.object.orientation() == Some(NormalOrientation::Inward) {
        pred = pred.into_iter().rev().map(|x| -x).collect();
    }
    Some(pred)
}

fn spectrum(s: &Scenario, res: &mut CheckResult) -> Outcome {
    let p = patch(s)?;
    let pts = points(s, &p)?;
    let mut table = Table::new(
        "spectrum",
        &["point", "mu", "eigenvalues", "predicted", "max_error"],
    );
    let mut worst: f64 = 0.0;
    let mut predicted_points = 0usize;
    let mut errors = 0usize;
    for (k, u) in pts.iter().enumerate() {
        let spec = match p.spectrum(u) {
            Ok(sp) => sp,
            Err(e) => {
                errors += 1;
                table.push(vec![
                    json!(k),
                    Value::Null,
                    Value::Null,
                    Value::Null,
                    json!(e.to_string()),
                ]);
                continue;
            }
        };
        let pred = prediction(s, u);
        let err = pred.as_ref().map(|q| {
            spec.eigenvalues
                .iter()
                .zip(q)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, max)
        });
        if let Some(e) = err {
            predicted_points += 1;
            worst = max(worst, e);
        }
        if k == 0 {
            res.metric("eigenvalues_first", list(&spec.eigenvalues));
            res.metric("mu_first", num(spec.mu));
            if let Some(q) = &pred {
                res.metric("predicted_first", list(q));
            }
        }
        table.push(vec![
            json!(k),
            num(spec.mu),
            list(&spec.eigenvalues),
            pred.as_deref().map_or(Value::Null, list),
            opt(err),
        ]);
    }
    res.metric("points", pts.len());
    res.metric("failed_points", errors);
    res.metric("predicted_points", predicted_points);
    res.tables.push(table);
    if errors > 0 {
        res.fail(format!("{errors} of {} points failed", pts.len()));
    }
    if predicted_points == 0 {
        if res.passed {
            res.summary = format!("{} points, no closed-form prediction", pts.len());
        }
        return Ok(());
    }
    res.metric("max_error", num(worst));
    if !(worst <= s.tol.spectrum) {
        res.fail(format!(
            "max |fd - predicted| = {worst:.3e} > {:.1e}",
            s.tol.spectrum
        ));
    } else if res.passed {
        res.summary = format!(
            "{predicted_points} points, max |fd - predicted| = {worst:.3e} <= {:.1e}",
            s.tol.spectrum
        );
    }
    Ok(())
}

fn hopf(s: &Scenario, res: &mut CheckResult) -> Outcome {
    let p = patch(s)?;
    let rep = p
        .hopf_report(&s.grid, s.tol.hopf)
        .map_err(|e| e.to_string())?;
    res.metric("samples", rep.samples);
    res.metric("max_defect", num(rep.max_defect));
    res.metric("mu_mean", num(rep.mu_mean));
    res.metric("mu_stddev", num(rep.mu_stddev));
    res.metric("mu_max_deviation", num(rep.mu_max_deviation));
    res.metric("is_hopf", rep.is_hopf);
    res.metric("failed_points", rep.failures.len());
    let mut t = Table::new("mu", &["point", "mu"]);
    for ((k, _), mu) in rep.spectra.iter().zip(&rep.mus) {
        t.push(vec![json!(k), num(*mu)]);
    }
    res.tables.push(t);
    if !rep.is_hopf {
        res.fail(format!(
            "not Hopf: max defect {:.3e}, {} failed points",
            rep.max_defect,
            rep.failures.len()
        ));
    }
    if !(rep.mu_stddev <= s.tol.mu_stddev) {
        res.fail(format!(
            "stddev(mu) = {:.3e} > {:.1e}",
            rep.mu_stddev, s.tol.mu_stddev
        ));
    }
    if res.passed {
        res.summary = format!(
            "is_hopf over {} points, mu = {:.9} (stddev {:.3e})",
            rep.samples, rep.mu_mean, rep.mu_stddev
        );
    }
    Ok(())
}

fn lemma4(s: &Scenario, res: &mut CheckResult) -> Outcome {
    let p = patch(s)?;
    let pts = points(s, &p)?;
    let mut t = Table::new("residuals", &["point", "mu", "identity", "pairing"]);
    let mut worst_id: f64 = 0.0;
    let mut worst_pair: Option<f64> = None;
    let mut errors = 0usize;
    for (k, u) in pts.iter().enumerate() {
        match lemma4_residuals(&p, u, s.tol.hopf) {
            Ok(l) => {
                worst_id = max(worst_id, l.identity_a_residual);
                if let Some(pr) = l.pairing_residual {
                    worst_pair = Some(worst_pair.map_or(pr, |w| max(w, pr)));
                }
                t.push(vec![
                    json!(k),
                    num(l.mu),
                    num(l.identity_a_residual),
                    opt(l.pairing_residual),
                ]);
            }
            Err(e) => {
                errors += 1;
                t.push(vec![
                    json!(k),
                    Value::Null,
                    Value::Null,
                    json!(e.to_string()),
                ]);
            }
        }
    }
    res.metric("points", pts.len());
    res.metric("failed_points", errors);
    res.metric("max_identity_residual", num(worst_id));
    res.metric("max_pairing_residual", opt(worst_pair));
    res.tables.push(t);
    if errors > 0 {
        res.fail(format!("{errors} of {} points failed", pts.len()));
    }
    if !(worst_id <= s.tol.lemma4) {
        res.fail(format!(
            "identity residual {worst_id:.3e} > {:.1e}",
            s.tol.lemma4
        ));
    }
    if let Some(w) = worst_pair {
        if !(w <= s.tol.pairing) {
            res.fail(format!("pairing residual {w:.3e} > {:.1e}", s.tol.pairing));
        }
    }
    if res.passed {
        res.summary = format!(
            "{} points, identity {:.3e}, pairing {}",
            pts.len(),
            worst_id,
            worst_pair.map_or("not applicable".to_string(), |w| format!("{w:.3e}"))
        );
    }
    Ok(())
}

fn structure(s: &Scenario, res: &mut CheckResult) -> Outcome {
    let p = patch(s)?;
    let pts = points(s, &p)?;
    let mut worst: f64 = 0.0;
    let mut errors = 0usize;
    for u in &pts {
        match p.frame_at(u) {
            Ok(f) => worst = max(worst, structure_tensors(&f).max_identity_residual()),
            Err(_) => errors += 1,
        }
    }
    res.metric("points", pts.len());
    res.metric("failed_points", errors);
    res.metric("max_identity_residual", num(worst));
    if errors > 0 {
        res.fail(format!("{errors} of {} points failed", pts.len()));
    }
    if !(worst <= s.tol.structure) {
        res.fail(format!(
            "structure identities off by {worst:.3e} > {:.1e}",
            s.tol.structure
        ));
    }
    if res.passed {
        res.summary = format!("{} points, max identity residual {worst:.3e}", pts.len());
    }
    Ok(())
}

fn miquel(s: &Scenario, res: &mut CheckResult) -> Outcome {
    let p = patch(s)?
        .with_fd_step(s.params.miquel_fd_step)
        .with_richardson(true);
    let pts = points(s, &p)?;
    let mut t = Table::new("miquel", &["point", "mu", "bound", "gap"]);
    let mut worst_gap: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut violated = 0usize;
    let mut inapplicable = 0usize;
    for (k, u) in pts.iter().enumerate() {
        let spec = p.spectrum(u).map_err(|e| format!("point {k}: {e}"))?;
        match miquel_check(&spec).map_err(|e| e.to_string())? {
            MiquelOutcome::Checked {
                lhs,
                rhs,
                satisfied,
            } => {
                let gap = lhs - rhs;
                worst_gap = max(worst_gap, gap.abs());
                min_gap = min_gap.min(gap);
                if !satisfied {
                    violated += 1;
                }
                t.push(vec![json!(k), num(lhs), num(rhs), num(gap)]);
            }
            MiquelOutcome::Inapplicable => {
                inapplicable += 1;
                t.push(vec![json!(k), num(spec.mu), Value::Null, Value::Null]);
            }
        }
    }
    res.metric("points", pts.len());
    res.metric("fd_step", num(s.params.miquel_fd_step));
    res.metric("inapplicable", inapplicable);
    res.metric("violations", violated);
    res.metric("max_abs_gap", num(worst_gap));
    res.metric("equality_required", s.params.miquel_equality);
    res.tables.push(t);
    res.metric("satisfied", pts.len() - violated - inapplicable);
    if s.params.miquel_equality {
        if violated > 0 {
            res.fail(format!("inequality violated at {violated} points"));
        }
        if inapplicable > 0 {
            res.fail(format!("{inapplicable} points at the cotangent pole"));
        }
        if !(worst_gap <= s.tol.miquel) {
            res.fail(format!(
                "equality off by {worst_gap:.3e} > {:.1e}",
                s.tol.miquel
            ));
        }
    }
    if res.passed {
        res.summary = if s.params.miquel_equality {
            format!(
                "equality at {} points, max |gap| {worst_gap:.3e}",
                pts.len()
            )
        } else {
            // The inequality is a hypothesis of a rigidity theorem, not a
            // property of Hopf hypersurfaces, so it is only reported here.
            format!(
                "diagnostic: inequality holds at {} of {} points, min gap {min_gap:.3e}",
                pts.len() - violated - inapplicable,
                pts.len()
            )
        };
    }
    Ok(())
}

fn focal(s: &Scenario, res: &mut CheckResult) -> Outcome {
    let tube = tube(s)?;
    let full = tube.dim();
    let inward = tube
        .patch(NormalOrientation::Inward)
        .map_err(|e| e.to_string())?
        .with_fd_step(s.fd_step);
    let center = inward
        .grid(&vec![1; full])
        .map_err(|e| e.to_string())?
        .remove(0);
    let spec = inward.spectrum(&center).map_err(|e| e.to_string())?;
    let report = focal_radii(&spec).map_err(|e| e.to_string())?;
    let (lo, hi) = s.params.interval;
    let cells = s.params.cells;
    let width = (hi - lo) / cells as f64;
    let cell_of = |r: f64| -> Option<usize> {
        (r >= lo && r < hi).then(|| (((r - lo) / width).floor() as usize).min(cells - 1))
    };

    let mut radii_t = Table::new("focal_radii", &["radius", "multiplicity", "source", "cell"]);
    let mut expected: Vec<usize> = Vec::new();
    for fr in &report.radii {
        let source = match fr.source {
            FocalSource::Eigenvalue { .. } => "eigenvalue",
            FocalSource::Hopf { .. } => "hopf",
        };
        // cot 2(theta - s) has period pi/2, so the Hopf root recurs.
        let mut copies = vec![(fr.radius, source)];
        if source == "hopf" {
            copies.push((fr.radius + FRAC_PI_2, "hopf+pi/2"));
        }
        for (r, src) in copies {
            let cell = cell_of(r);
            if cell.is_none() && src == "hopf+pi/2" {
                continue;
            }
            if let Some(c) = cell {
                if !expected.contains(&c) {
                    expected.push(c);
                }
            }
            radii_t.push(vec![
                num(r),
                json!(fr.multiplicity),
                json!(src),
                json!(cell),
            ]);
        }
    }
    expected.sort_unstable();

    let base: Arc<dyn BaseSubmanifold> = Arc::new(HypersurfaceBase::new(tube));
    let rows = focal_cell_sweep(base, (lo, hi), cells, &[center], s.tol.rank)
        .map_err(|e| e.to_string())?;
    let mut cells_t = Table::new(
        "cells",
        &["cell", "lo", "hi", "min_rank", "argmin_radius", "min_ratio"],
    );
    let mut dips = Vec::new();
    let mut odd = Vec::new();
    for r in &rows {
        if r.min_rank < full {
            dips.push(r.index);
            if r.min_rank % 2 != 0 {
                odd.push(r.index);
            }
        }
        cells_t.push(vec![
            json!(r.index),
            num(r.lo),
            num(r.hi),
            json!(r.min_rank),
            num(r.argmin_radius),
            num(r.min_ratio),
        ]);
    }
    res.metric("cells", cells);
    res.metric("full_rank", full);
    res.metric("expected_cells", json!(expected));
    res.metric("dip_cells", json!(dips));
    res.metric(
        "dip_ranks",
        json!(rows
            .iter()
            .filter(|r| r.min_rank < full)
            .map(|r| r.min_rank)
            .collect::<Vec<_>>()),
    );
    res.tables.push(radii_t);
    res.tables.push(cells_t);
    if dips != expected {
        res.fail(format!(
            "rank dips in cells {dips:?}, focal radii in cells {expected:?}"
        ));
    }
    if !odd.is_empty() {
        res.fail(format!("odd image rank in cells {odd:?}"));
    }
    if res.passed {
        res.summary =
            format!("rank dips exactly in cells {dips:?} of {cells}, all with even image rank");
    }
    Ok(())
}

fn rank_table(s: &Scenario, res: &mut CheckResult) -> Outcome {
    let tube = tube(s)?;
    let full = tube.dim();
    let grid = s.params.rank_grid.clone().unwrap_or_else(|| s.grid.clone());
    let rows = rank_sweep(tube.base().clone(), &s.params.radii, &grid, s.tol.rank)
        .map_err(|e| e.to_string())?;
    let mut t = Table::new("ranks", &["radius", "min_rank", "max_rank", "failures"]);
    let mut empty = 0usize;
    let mut failures = 0usize;
    let mut below = 0usize;
    for r in &rows {
        if r.min_rank.is_none() {
            empty += 1;
        }
        if r.min_rank.is_some_and(|m| m < full) {
            below += 1;
        }
        failures += r.failures.len();
        t.push(vec![
            num(r.radius),
            json!(r.min_rank),
            json!(r.max_rank),
            json!(r.failures.len()),
        ]);
    }
    res.metric("rows", rows.len());
    res.metric("full_rank", full);
    res.metric("rows_below_full_rank", below);
    res.metric("failed_points", failures);
    res.tables.push(t);
    if empty > 0 {
        res.fail(format!("{empty} rows without a measurement"));
    }
    if failures > 0 {
        res.fail(format!("{failures} grid points failed"));
    }
    if res.passed {
        res.summary = format!("{} radii, {below} below full rank {full}", rows.len());
    }
    Ok(())
}

fn duality(s: &Scenario, res: &mut CheckResult) -> Outcome {
    let f = s.object.polynomial().ok_or("object has no polynomial")?;
    let pts = sample_variety(f, s.params.samples, s.seed).map_err(|e| e.to_string())?;
    let mut worst_d: f64 = 0.0;
    let mut worst_dual: f64 = 0.0;
    for x in &pts {
        let pair = IncidencePair::new(f, x.clone()).map_err(|e| e.to_string())?;
        worst_d = max(worst_d, (pair.distance() - FRAC_PI_2).abs());
        if let Some(y0) = &s.params.dual_point {
            worst_dual = max(worst_dual, pair.y.distance(y0).map_err(|e| e.to_string())?);
        }
    }
    res.metric("samples", pts.len());
    res.metric("max_distance_residual", num(worst_d));
    if !(worst_d <= s.tol.distance) {
        res.fail(format!(
            "|d(x, y) - pi/2| = {worst_d:.3e} > {:.1e}",
            s.tol.distance
        ));
    }
    if let Some(y0) = &s.params.dual_point {
        res.metric("max_dual_point_distance", num(worst_dual));
        res.metric("dual_point", json!(coords(y0)));
        if !(worst_dual <= s.tol.distance) {
            res.fail(format!(
                "Gauss image leaves the expected point by {worst_dual:.3e}"
            ));
        }
    }

    let mut t = Table::new(
        "tube_duality",
        &["radius", "direct", "membership", "radius_residual"],
    );
    let mut worst_direct: f64 = 0.0;
    let mut worst_member: f64 = 0.0;
    let mut worst_radius: f64 = 0.0;
    for (i, &r) in s.params.duality_radii.iter().enumerate() {
        let rep = tube_duality_check(
            f,
            r,
            s.params.duality_samples,
            s.seed.wrapping_add(1 + i as u64),
        )
        .map_err(|e| format!("radius {r}: {e}"))?;
        worst_direct = max(worst_direct, rep.direct_residual);
        worst_member = max(worst_member, rep.membership_residual);
        worst_radius = max(worst_radius, rep.radius_residual);
        t.push(vec![
            num(r),
            num(rep.direct_residual),
            num(rep.membership_residual),
            num(rep.radius_residual),
        ]);
    }
    res.metric("duality_radii", s.params.duality_radii.len());
    res.metric("max_direct_residual", num(worst_direct));
    res.metric("max_membership_residual", num(worst_member));
    res.metric("max_radius_residual", num(worst_radius));
    res.tables.push(t);
    if !(worst_direct <= s.tol.duality) {
        res.fail(format!(
            "direct tube-duality residual {worst_direct:.3e} > {:.1e}",
            s.tol.duality
        ));
    }
    if !(worst_radius <= s.tol.distance) {
        res.fail(format!(
            "tube radius residual {worst_radius:.3e} > {:.1e}",
            s.tol.distance
        ));
    }

    let bpts = sample_variety(f, s.params.biduality_points, s.seed.wrapping_add(1000))
        .map_err(|e| e.to_string())?;
    let mut b = Table::new("biduality", &["point", "outcome", "value"]);
    let (mut holds, mut fails, mut inapplicable) = (0usize, 0usize, 0usize);
    let mut worst_b: f64 = 0.0;
    for (k, x) in bpts.iter().enumerate() {
        let row = match biduality_spot_check(f, x).map_err(|e| e.to_string())? {
            BidualityOutcome::Holds { error } => {
                holds += 1;
                worst_b = max(worst_b, error);
                ("holds", error)
            }
            BidualityOutcome::Fails { error } => {
                fails += 1;
                ("fails", error)
            }
            BidualityOutcome::Inapplicable { gauss_rank_sigma } => {
                inapplicable += 1;
                ("inapplicable", gauss_rank_sigma)
            }
        };
        b.push(vec![json!(k), json!(row.0), num(row.1)]);
    }
    res.metric("biduality_holds", holds);
    res.metric("biduality_fails", fails);
    res.metric("biduality_inapplicable", inapplicable);
    res.metric("max_biduality_error", num(worst_b));
    res.tables.push(b);
    let n = bpts.len();
    let ok = match s.params.expect_biduality {
        BidualityExpectation::Holds => holds == n,
        BidualityExpectation::Inapplicable => inapplicable == n,
        BidualityExpectation::NoFailure => fails == 0,
    };
    if !ok {
        res.fail(format!(
            "biduality: {holds} hold, {fails} fail, {inapplicable} inapplicable of {n}"
        ));
    }
    if res.passed {
        res.summary = format!(
            "d(x, y) = pi/2 within {worst_d:.1e}; direct residual {worst_direct:.1e} over {} radii; biduality {holds}/{inapplicable}/{fails} (holds/inapplicable/fails)",
            s.params.duality_radii.len()
        );
    }
    Ok(())
}

fn coords(p: &ModelPoint) -> Vec<[f64; 2]> {
    p.coords().iter().map(|z| [z.re, z.im]).collect()
}

fn blowup(s: &Scenario, res: &mut CheckResult) -> Outcome {
    let f = s.object.polynomial().ok_or("object has no polynomial")?;
    let target = s
        .params
        .target
        .as_ref()
        .or(s.object.polynomial_point())
        .ok_or("no target point")?;
    let curve = ApproachCurve::new(
        s.params.direction.clone().ok_or("no approach direction")?,
        s.params
            .transversal
            .clone()
            .ok_or("no transversal direction")?,
    );
    let samples = singular_blowup_probe(f, target, s.params.probe_radius, &s.params.scales, &curve)
        .map_err(|e| e.to_string())?;
    let mut t = Table::new(
        "probe",
        &[
            "scale",
            "distance",
            "grad_norm",
            "base_curvature",
            "max_abs_curvature",
            "predicted",
            "skipped",
        ],
    );
    for x in &samples {
        t.push(vec![
            num(x.scale),
            opt(x.distance),
            opt(x.grad_norm),
            opt(x.base_curvature),
            opt(x.max_abs_curvature),
            opt(x.predicted_max_abs),
            x.skipped.as_deref().map_or(Value::Null, |m| json!(m)),
        ]);
    }
    let values: Vec<Option<f64>> = samples.iter().map(|x| x.max_abs_curvature).collect();
    let skipped = samples.iter().filter(|x| x.skipped.is_some()).count();
    res.metric("radius", num(s.params.probe_radius));
    res.metric("scales", samples.len());
    res.metric("skipped", skipped);
    res.metric("target", json!(coords(target)));
    res.tables.push(t);
    match s.params.blowup_expect {
        BlowupExpectation::Diverge => {
            res.metric("threshold", num(s.params.blowup_threshold));
            if values.len() < 3 {
                res.fail("need at least three scales");
                return Ok(());
            }
            let tail = &values[values.len() - 3..];
            if tail.iter().any(Option::is_none) {
                res.fail(format!(
                    "{} of the last 3 scales have no curvature value (see skipped column)",
                    tail.iter().filter(|v| v.is_none()).count()
                ));
                return Ok(());
            }
            let tail: Vec<f64> = tail.iter().map(|v| v.expect("checked")).collect();
            let increasing = tail.windows(2).all(|w| w[1] > w[0]);
            let last = tail[2];
            res.metric("final", num(last));
            if !increasing {
                res.fail(format!("tail {tail:?} not strictly increasing"));
            }
            if !(last > s.params.blowup_threshold) {
                res.fail(format!(
                    "final value {last:.4e} <= {:.1e}",
                    s.params.blowup_threshold
                ));
            }
            if res.passed {
                res.summary = format!("increasing tail, final max|kappa| = {last:.4e}");
            }
        }
        BlowupExpectation::Bounded => {
            let Some(Some(first)) = values.first().copied() else {
                res.fail("first scale has no curvature value");
                return Ok(());
            };
            let worst = values.iter().flatten().fold(0.0, |a: f64, &b| max(a, b));
            res.metric("first", num(first));
            res.metric("max", num(worst));
            if values.iter().any(Option::is_none) {
                res.fail(format!("{skipped} scales skipped"));
            }
            if !(worst <= s.params.bounded_factor * first) {
                res.fail(format!(
                    "max {worst:.4e} exceeds {} x first {first:.4e}",
                    s.params.bounded_factor
                ));
            }
            if res.passed {
                res.summary = format!(
                    "bounded: max {worst:.4e} within {} x first {first:.4e}",
                    s.params.bounded_factor
                );
            }
        }
    }
    Ok(())
}

fn singular_locus(s: &Scenario, res: &mut CheckResult) -> Outcome {
    let f = s.object.polynomial().ok_or("object has no polynomial")?;
    let cands = singular_locus_probe(f, s.params.singular_grid).map_err(|e| e.to_string())?;
    let mut t = Table::new("candidates", &["point", "value", "grad_norm"]);
    for c in &cands {
        t.push(vec![
            json!(coords(&c.point)),
            num(c.value),
            num(c.grad_norm),
        ]);
    }
    res.metric("candidates", cands.len());
    res.metric("expect_singular", s.params.expect_singular);
    res.tables.push(t);
    if s.params.expect_singular {
        if cands.is_empty() {
            res.fail("no singular point found");
        }
        if let Some(target) = &s.params.target {
            let nearest = cands
                .iter()
                .filter_map(|c| c.point.distance(target).ok())
                .fold(f64::INFINITY, f64::min);
            res.metric("target_distance", num(nearest));
            if !(nearest <= 1e-6) {
                res.fail(format!(
                    "target not among the candidates (nearest {nearest:.3e})"
                ));
            }
        }
    } else if !cands.is_empty() {
        res.fail(format!(
            "{} singular candidates on a variety expected smooth",
            cands.len()
        ));
    }
    if res.passed {
        res.summary = format!("{} singular candidates", cands.len());
    }
    Ok(())
}

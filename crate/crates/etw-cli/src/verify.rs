//! Construction and verification drivers behind `etw construct` and
//! `etw verify`.

use std::collections::{BTreeMap, BTreeSet};

use anyhow::{anyhow, bail, Result};
use serde_json::json;

use etw_core::domains::{alpha_c, approx_set, domain_to_modular, interpolate};
use etw_core::kernel::{finite_set_program, second_component_program, smn};
use etw_core::numberings::{
    effective_discreteness_check, positivity_check, wn_check, CeSet, DiscretenessResult,
    PositiveWitness, PositivityVerdict, PrincipalNumbering, WnVerdict,
};
use etw_core::report::{CheckRecord, Report, VerdictKind};
use etw_core::spaces::{
    build_x_s, build_x_t, ee_space_check, homeomorphism_check, intersection_identity_check,
    modular_check, BasisNumbering, EeVerdict, GFn, HomeomorphismVerdict,
    IntersectionIdentityVerdict, ModularVerdict, ModularWitness, Space, SpaceTier,
};
use etw_core::trees::{sigma_t_limit, s_t_members, PartialPath, Tree};
use etw_core::Nat;

use crate::Ctx;

/// Builds the space a name denotes: a `space` block when defined, otherwise
/// a tree or family of that name.
pub fn build_space(ctx: &Ctx, name: &str) -> Result<Space> {
    if let Some(source) = ctx.resolved.space(name) {
        return match source {
            etw_core::instance::SpaceSource::Tree(t) => Ok(build_x_t(t)
                .map_err(|e| anyhow!("building space from tree: {e}"))?
                .0),
            etw_core::instance::SpaceSource::Family(f) => Ok(build_x_s(f)
                .map_err(|e| anyhow!("building space from family: {e}"))?
                .0),
            etw_core::instance::SpaceSource::Explicit { points, opens } => {
                explicit_space(name, points, opens)
            }
        };
    }
    if let Some(t) = ctx.resolved.tree(name) {
        return Ok(build_x_t(&t)
            .map_err(|e| anyhow!("building space from tree: {e}"))?
            .0);
    }
    if let Some(f) = ctx.resolved.family(name) {
        return Ok(build_x_s(&f)
            .map_err(|e| anyhow!("building space from family: {e}"))?
            .0);
    }
    bail!("no space, tree or family named `{name}`")
}

/// An explicit space block: opens listed by index, the canonical `g`
/// collecting every basic open inside the intersection.
fn explicit_space(name: &str, points: &[String], opens: &[BTreeSet<String>]) -> Result<Space> {
    let point_id = |label: &str| -> Result<usize> {
        points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| anyhow!("open references unknown point `{label}`"))
    };
    let mut table: BTreeMap<Nat, BTreeSet<usize>> = BTreeMap::new();
    for (i, open) in opens.iter().enumerate() {
        let ids: BTreeSet<usize> = open
            .iter()
            .map(|l| point_id(l))
            .collect::<Result<_>>()?;
        if !ids.is_empty() {
            table.insert(i as Nat, ids);
        }
    }
    let empty_rep = opens.len() as Nat;
    let nonempty: BTreeSet<Nat> = table.keys().copied().collect();
    let reps: Vec<Nat> = nonempty.iter().copied().chain([empty_rep]).collect();
    let mut lists: BTreeMap<(Nat, Nat), Vec<Nat>> = BTreeMap::new();
    for &i in &reps {
        for &j in &reps {
            let target: BTreeSet<usize> = table
                .get(&i)
                .cloned()
                .unwrap_or_default()
                .intersection(&table.get(&j).cloned().unwrap_or_default())
                .copied()
                .collect();
            let inside: Vec<Nat> = reps
                .iter()
                .copied()
                .filter(|k| {
                    let a = table.get(k).cloned().unwrap_or_default();
                    !a.is_empty() && a.is_subset(&target)
                })
                .collect();
            lists.insert(
                (i, j),
                if inside.is_empty() {
                    vec![empty_rep]
                } else {
                    inside
                },
            );
        }
    }
    Ok(Space {
        name: name.to_string(),
        tier: SpaceTier::ExplicitFinite,
        points: points.to_vec(),
        basis: BasisNumbering::from_table(table, empty_rep),
        g: GFn::precomputed(lists, empty_rep),
        nonempty: CeSet::Finite(nonempty),
        symbolic_membership: None,
        provenance: "explicit block".into(),
    })
}

fn witness_space(ctx: &Ctx, name: &str) -> Result<(Space, Option<ModularWitness>)> {
    if let Some(t) = ctx.resolved.tree(name) {
        let (s, w) = build_x_t(&t).map_err(|e| anyhow!("{e}"))?;
        return Ok((s, Some(w)));
    }
    if let Some(d) = ctx.resolved.domain(name) {
        let (s, w) = domain_to_modular(&d);
        return Ok((s, Some(w)));
    }
    Ok((build_space(ctx, name)?, None))
}

pub fn construct(ctx: &Ctx, kind: &str, name: &str, report: &mut Report) -> Result<()> {
    let b = ctx.budgets;
    match kind {
        "space-from-tree" | "space-from-family" | "space" => {
            let space = build_space(ctx, name)?;
            report.push(
                CheckRecord::new(format!("construct/{kind}/{name}"), VerdictKind::Verified, b)
                    .with_witness(json!({
                        "points": space.points,
                        "basis_reps": space.basis.reps(),
                        "provenance": space.provenance,
                    })),
            );
        }
        "domain-space" => {
            let d = ctx
                .resolved
                .domain(name)
                .ok_or_else(|| anyhow!("unknown domain `{name}`"))?;
            let (space, witness) = domain_to_modular(&d);
            report.push(
                CheckRecord::new(format!("construct/domain-space/{name}"), VerdictKind::Verified, b)
                    .with_witness(json!({
                        "points": space.points,
                        "witness_len": witness.len(),
                    })),
            );
        }
        "family" => {
            let f = ctx
                .resolved
                .family(name)
                .ok_or_else(|| anyhow!("unknown family `{name}`"))?;
            report.push(
                CheckRecord::new(format!("construct/family/{name}"), VerdictKind::Verified, b)
                    .with_witness(json!({
                        "members": f.members().map(|m| m.len()),
                    })),
            );
        }
        "tree" => {
            let t = ctx
                .resolved
                .tree(name)
                .ok_or_else(|| anyhow!("unknown tree `{name}`"))?;
            let vertices = t.vertices().map(|v| v.len());
            report.push(
                CheckRecord::new(format!("construct/tree/{name}"), VerdictKind::Verified, b)
                    .with_witness(json!({ "vertices": vertices })),
            );
        }
        other => bail!("unknown construct kind `{other}`"),
    }
    Ok(())
}

pub fn verify(ctx: &Ctx, kind: &str, name: &str, report: &mut Report) -> Result<()> {
    match kind {
        "space-from-tree" | "space" | "space-from-family" | "domain-space" => {
            verify_space(ctx, name, report)
        }
        "domain" => verify_domain(ctx, name, report),
        "family" => verify_family(ctx, name, report),
        "tree" => verify_tree(ctx, name, report),
        "kernel" => verify_kernel(ctx, report),
        other => bail!("unknown verify kind `{other}`"),
    }
}

fn push_ee(report: &mut Report, ctx: &Ctx, name: &str, space: &Space) {
    let v = ee_space_check(space, ctx.budgets);
    let (kind, witness) = match &v {
        EeVerdict::Verified { uncovered_points } => (
            VerdictKind::Verified,
            json!({ "uncovered_points": uncovered_points }),
        ),
        other => (VerdictKind::Refuted, json!(format!("{other:?}"))),
    };
    let kind = if matches!(v, EeVerdict::Unknown { .. }) {
        VerdictKind::Unknown
    } else {
        kind
    };
    report.push(
        CheckRecord::new(format!("ee-space/{name}"), kind, ctx.budgets).with_witness(witness),
    );
}

fn verify_space(ctx: &Ctx, name: &str, report: &mut Report) -> Result<()> {
    let (space, witness) = witness_space(ctx, name)?;
    push_ee(report, ctx, name, &space);
    // family-derived spaces also carry the homeomorphism and the
    // transferred normalizer
    if let Some(family) = ctx.resolved.family(name) {
        let (space_s, data) = build_x_s(&family).map_err(|e| anyhow!("{e}"))?;
        let universe_bits = data
            .class_member
            .iter()
            .flatten()
            .max()
            .map(|m| m + 1)
            .unwrap_or(0);
        let homeo_bound = (1u64 << universe_bits.min(10)).max(8);
        let hv = homeomorphism_check(&space_s, &data, homeo_bound);
        report.push(
            CheckRecord::new(
                format!("homeomorphism/{name}"),
                if matches!(hv, HomeomorphismVerdict::Verified { .. }) {
                    VerdictKind::Verified
                } else {
                    VerdictKind::Refuted
                },
                ctx.budgets,
            )
            .with_witness(json!(format!("{hv:?}"))),
        );
        let a_set_family = etw_core::numberings::WnFamily {
            sigma: data.sigma_star.clone(),
            h0: None,
            explicit_members: Some(data.gamma_star.clone()),
        };
        let candidates: Vec<CeSet> = data
            .gamma_star
            .iter()
            .map(|s| CeSet::Finite(s.clone()))
            .collect();
        let verdicts = wn_check(&a_set_family, &candidates, ctx.budgets);
        let ok = verdicts
            .iter()
            .all(|v| matches!(v, WnVerdict::Verified { .. }));
        report.push(
            CheckRecord::new(
                format!("transferred-wn/{name}"),
                if ok {
                    VerdictKind::Verified
                } else {
                    VerdictKind::Refuted
                },
                ctx.budgets,
            )
            .with_witness(json!(verdicts
                .iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>())),
        );
    }
    if let Some(w) = &witness {
        let v = modular_check(&space, w, ctx.budgets);
        let kind = match &v {
            ModularVerdict::Verified => VerdictKind::Verified,
            ModularVerdict::Unknown { .. } => VerdictKind::Unknown,
            _ => VerdictKind::Refuted,
        };
        report.push(
            CheckRecord::new(format!("modular/{name}"), kind, ctx.budgets)
                .with_witness(json!(format!("{v:?}"))),
        );
        // intersection identities for |V| <= min(bound, 3)
        let reps = space.basis.reps().to_vec();
        let max_size = ctx.bound.min(3) as usize;
        let mut all_ok = true;
        let mut counterexample = None;
        let mut combos: Vec<Vec<Nat>> = vec![vec![]];
        for size in 1..=max_size {
            let mut next = Vec::new();
            for c in combos.iter().filter(|c| c.len() == size - 1) {
                let start = c.last().map(|&l| l + 1).unwrap_or(0);
                for &r in reps.iter().filter(|&&r| r >= start) {
                    let mut cc = c.clone();
                    cc.push(r);
                    next.push(cc);
                }
            }
            combos.extend(next);
        }
        for c in &combos {
            let v_set: BTreeSet<Nat> = c.iter().copied().collect();
            if let IntersectionIdentityVerdict::Refuted { .. } =
                intersection_identity_check(&space, w, &v_set, ctx.budgets)
            {
                all_ok = false;
                counterexample = Some(v_set);
                break;
            }
        }
        report.push(
            CheckRecord::new(
                format!("intersection-identity/{name}"),
                if all_ok {
                    VerdictKind::Verified
                } else {
                    VerdictKind::Refuted
                },
                ctx.budgets,
            )
            .with_witness(json!({
                "subsets_checked": combos.len(),
                "max_size": max_size,
                "counterexample": counterexample,
            })),
        );
    }
    Ok(())
}

fn verify_domain(ctx: &Ctx, name: &str, report: &mut Report) -> Result<()> {
    let d = ctx
        .resolved
        .domain(name)
        .ok_or_else(|| anyhow!("unknown domain `{name}`"))?;
    let (space, witness) = domain_to_modular(&d);
    push_ee(report, ctx, name, &space);
    let v = modular_check(&space, &witness, ctx.budgets);
    report.push(
        CheckRecord::new(
            format!("modular/{name}"),
            if v == ModularVerdict::Verified {
                VerdictKind::Verified
            } else {
                VerdictKind::Refuted
            },
            ctx.budgets,
        )
        .with_witness(json!(format!("{v:?}"))),
    );
    // alpha_c recovers every element from its approximation set
    let mut recovered = Vec::new();
    let mut ok = true;
    for elem in 0..d.len() {
        let input = CeSet::Finite(approx_set(&d, elem));
        let approx = alpha_c(&d, &input, 4 * d.len() as Nat + 8);
        let got = d.beta(approx.limit_index());
        recovered.push(got);
        ok &= got == elem;
    }
    report.push(
        CheckRecord::new(
            format!("alpha-c-surjective/{name}"),
            if ok {
                VerdictKind::Verified
            } else {
                VerdictKind::Refuted
            },
            ctx.budgets,
        )
        .with_witness(json!({ "recovered": recovered })),
    );
    // interpolation for every way-below pair
    let m = d.len() as Nat;
    let mut interp_ok = true;
    for i in 0..m {
        for y in 0..m {
            if d.way_below(i, y) {
                interp_ok &= interpolate(&d, &BTreeSet::from([i]), y).is_ok();
            }
        }
    }
    report.push(CheckRecord::new(
        format!("interpolation/{name}"),
        if interp_ok {
            VerdictKind::Verified
        } else {
            VerdictKind::Refuted
        },
        ctx.budgets,
    ));
    Ok(())
}

fn verify_family(ctx: &Ctx, name: &str, report: &mut Report) -> Result<()> {
    let f = ctx
        .resolved
        .family(name)
        .ok_or_else(|| anyhow!("unknown family `{name}`"))?;
    let members = f
        .members()
        .ok_or_else(|| anyhow!("family `{name}` is not explicit"))?
        .to_vec();
    let candidates: Vec<CeSet> = members.iter().map(|m| CeSet::Finite(m.clone())).collect();
    let verdicts = wn_check(&f, &candidates, ctx.budgets);
    let ok = verdicts
        .iter()
        .all(|v| matches!(v, WnVerdict::Verified { .. }));
    report.push(
        CheckRecord::new(
            format!("wn-conditions/{name}"),
            if ok {
                VerdictKind::Verified
            } else {
                VerdictKind::Refuted
            },
            ctx.budgets,
        )
        .with_witness(json!(verdicts
            .iter()
            .map(|v| format!("{v:?}"))
            .collect::<Vec<_>>())),
    );
    let gamma = PrincipalNumbering::new(f.clone());
    match gamma.surjectivity_bound(ctx.budgets, 200_000) {
        Some((bound, hits)) => report.push(
            CheckRecord::new(format!("gamma-surjective/{name}"), VerdictKind::Verified, ctx.budgets)
                .with_witness(json!({ "bound": bound, "first_hits": hits })),
        ),
        None => report.push(CheckRecord::new(
            format!("gamma-surjective/{name}"),
            VerdictKind::Unknown,
            ctx.budgets,
        )),
    }
    let disc = effective_discreteness_check(&members, ctx.bound.max(8));
    report.push(
        CheckRecord::new(
            format!("effective-discreteness/{name}"),
            VerdictKind::Verified,
            ctx.budgets,
        )
        .with_witness(match disc {
            DiscretenessResult::Witness { supports, .. } => json!({ "supports": supports }),
            DiscretenessResult::Refuted {
                member, absolute, ..
            } => json!({ "refuted_member": member, "absolute": absolute }),
        }),
    );
    let pos = positivity_check(
        &gamma,
        &PositiveWitness::ExplicitEquality,
        20,
        ctx.budgets,
    );
    report.push(CheckRecord::new(
        format!("positivity/{name}"),
        match pos {
            PositivityVerdict::Verified => VerdictKind::Verified,
            PositivityVerdict::Refuted { .. } => VerdictKind::Refuted,
            PositivityVerdict::Unknown { .. } => VerdictKind::Unknown,
        },
        ctx.budgets,
    ));
    Ok(())
}

fn verify_tree(ctx: &Ctx, name: &str, report: &mut Report) -> Result<()> {
    let t = ctx
        .resolved
        .tree(name)
        .ok_or_else(|| anyhow!("unknown tree `{name}`"))?;
    let explicit = match &t {
        Tree::Explicit { .. } => t.clone(),
        _ => t
            .truncate(ctx.bound.min(8) as usize, 2)
            .map_err(|e| anyhow!("truncating: {e}"))?,
    };
    let vertices = explicit.vertices().unwrap().clone();
    // the vertex/path bijection
    let members = s_t_members(&explicit).map_err(|e| anyhow!("{e}"))?;
    report.push(
        CheckRecord::new(
            format!("vertex-path-bijection/{name}"),
            if members.len() == vertices.len() {
                VerdictKind::Verified
            } else {
                VerdictKind::Refuted
            },
            ctx.budgets,
        )
        .with_witness(json!({ "vertices": vertices.len(), "paths": members.len() })),
    );
    // the normalizer converges to every coded path
    let mut ok = true;
    let mut max_stage = 0;
    for v in &vertices {
        let codes = PartialPath::of_vertex(&explicit, v)
            .map_err(|e| anyhow!("{e}"))?
            .delta_codes();
        match sigma_t_limit(&explicit, &CeSet::Finite(codes.clone())) {
            Some((limit, stage)) => {
                ok &= limit == codes;
                max_stage = max_stage.max(stage);
            }
            None => ok = false,
        }
    }
    report.push(
        CheckRecord::new(
            format!("sigma-t-convergence/{name}"),
            if ok {
                VerdictKind::Verified
            } else {
                VerdictKind::Refuted
            },
            ctx.budgets,
        )
        .with_witness(json!({ "paths": vertices.len() }))
        .with_saturation(max_stage),
    );
    Ok(())
}

fn verify_kernel(ctx: &Ctx, report: &mut Report) -> Result<()> {
    // spot checks: codings round-trip and the s-m-n equation holds on the
    // projection program
    let b = ctx.budgets;
    let mut ok = true;
    for n in 0..2_000u64 {
        let e = etw_core::kernel::ProgramIndex::from(n);
        ok &= etw_core::kernel::encode_program(&etw_core::kernel::decode_program(&e)) == e;
        ok &= etw_core::nat::pair(etw_core::nat::unpair(n).0, etw_core::nat::unpair(n).1) == n;
        ok &= etw_core::nat::dn_encode(&etw_core::nat::dn_decode(n)) == Some(n);
    }
    report.push(CheckRecord::new(
        "kernel/codings-roundtrip",
        if ok {
            VerdictKind::Verified
        } else {
            VerdictKind::Refuted
        },
        b,
    ));
    let proj2 = etw_core::kernel::encode_program(&second_component_program());
    let mut smn_ok = true;
    for y in [0u64, 3, 9] {
        let e = smn(&proj2, y);
        let p = etw_core::kernel::decode_program(&e);
        for x in [0u64, 1, 7, 20] {
            smn_ok &= etw_core::kernel::run(&p, x, b.steps).halted() == Some(x);
        }
    }
    report.push(CheckRecord::new(
        "kernel/smn-projection",
        if smn_ok {
            VerdictKind::Verified
        } else {
            VerdictKind::Refuted
        },
        b,
    ));
    // a membership program has the right domain
    let f = BTreeSet::from([1, 4]);
    let p = finite_set_program(&f);
    let dom_ok = (0..8).all(|x| {
        matches!(etw_core::kernel::run(&p, x, b.steps), etw_core::kernel::EvalResult::Halted(_))
            == f.contains(&x)
    });
    report.push(CheckRecord::new(
        "kernel/finite-set-program",
        if dom_ok {
            VerdictKind::Verified
        } else {
            VerdictKind::Refuted
        },
        b,
    ));
    Ok(())
}

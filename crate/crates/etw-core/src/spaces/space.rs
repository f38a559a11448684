//! Effectively enumerable T0-spaces.
//!
//! Explicit-finite spaces carry their full point list and evaluate every
//! check exhaustively; symbolic spaces only expose budgeted semi-decisions
//! and never refute universal statements. The basis is an omega-indexed
//! numbering realized by a finite table of representative indices: every
//! index outside the table denotes the empty set, which is exact for all the
//! constructions in this crate (a finite tree or family only inhabits
//! finitely many basic opens).

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::budgets::Budgets;
use crate::kernel::{decode_program, run, EvalResult, ProgramIndex};
use crate::nat::{dn_decode, pair, Nat};
use crate::numberings::CeSet;

pub type PointId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpaceTier {
    ExplicitFinite,
    Symbolic,
}

/// An effectively open set: a c.e. set of basis indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffOpenSet {
    pub index_set: CeSet,
}

impl EffOpenSet {
    pub fn finite<I: IntoIterator<Item = Nat>>(indices: I) -> Self {
        EffOpenSet {
            index_set: CeSet::finite(indices),
        }
    }
}

/// A computable element: the c.e. set of basis indices containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputableElement {
    pub a_x: CeSet,
}

/// Basis numbering backed by a finite table; indices off the table denote
/// the empty set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct BasisNumbering {
    table: BTreeMap<Nat, BTreeSet<PointId>>,
    reps: Vec<Nat>,
}

impl BasisNumbering {
    /// Builds from a table; representatives are the table keys plus one
    /// index denoting the empty set.
    pub fn from_table(table: BTreeMap<Nat, BTreeSet<PointId>>, empty_rep: Nat) -> Self {
        let mut reps: Vec<Nat> = table.keys().copied().collect();
        if !table.contains_key(&empty_rep) {
            reps.push(empty_rep);
        }
        reps.sort_unstable();
        BasisNumbering { table, reps }
    }

    pub fn eval(&self, i: Nat) -> BTreeSet<PointId> {
        self.table.get(&i).cloned().unwrap_or_default()
    }

    /// Indices the exhaustive checks quantify over; every basic open the
    /// space has occurs at one of them.
    pub fn reps(&self) -> &[Nat] {
        &self.reps
    }
}

/// The intersection witness `g` with `α(i) ∩ α(j) = ∪_n α(g(i, j, n))`.
/// Tuple-keyed tables are stored as sorted entry lists so snapshots stay
/// plain JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GFn {
    /// Finite lists per representative pair; off-table pairs map to the
    /// empty index. n beyond a list repeats its last entry (or empty).
    Precomputed {
        lists: Vec<((Nat, Nat), Vec<Nat>)>,
        empty_index: Nat,
    },
    /// `g(n, m, _) = n | m`: D-code union, exact for subset-of-members bases.
    DnOr,
    /// A register program on `pair(pair(i, j), n)`.
    Program(ProgramIndex),
    /// Fault-injection wrapper: patched entries override the base.
    Override {
        base: Box<GFn>,
        patches: Vec<((Nat, Nat, Nat), Nat)>,
    },
}

impl GFn {
    pub fn precomputed(map: BTreeMap<(Nat, Nat), Vec<Nat>>, empty_index: Nat) -> GFn {
        GFn::Precomputed {
            lists: map.into_iter().collect(),
            empty_index,
        }
    }

    /// Evaluates g; `None` means the program form diverged within budget.
    pub fn eval(&self, i: Nat, j: Nat, n: Nat, budgets: Budgets) -> Option<Nat> {
        match self {
            GFn::Precomputed { lists, empty_index } => {
                let list = lists
                    .binary_search_by_key(&(i, j), |(k, _)| *k)
                    .ok()
                    .map(|pos| &lists[pos].1);
                Some(match list {
                    None => *empty_index,
                    Some(l) => l
                        .get(n as usize)
                        .or_else(|| l.last())
                        .copied()
                        .unwrap_or(*empty_index),
                })
            }
            GFn::DnOr => Some(i | j),
            GFn::Program(e) => {
                let p = decode_program(e);
                match run(&p, pair(pair(i, j), n), budgets.steps) {
                    EvalResult::Halted(v) => Some(v),
                    EvalResult::Exhausted => None,
                }
            }
            GFn::Override { base, patches } => {
                match patches.iter().find(|(k, _)| *k == (i, j, n)) {
                    Some((_, v)) => Some(*v),
                    None => base.eval(i, j, n, budgets),
                }
            }
        }
    }
}

/// An effectively enumerable T0-space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    pub name: String,
    pub tier: SpaceTier,
    /// Explicit tier: point labels, indexed by `PointId`.
    pub points: Vec<String>,
    pub basis: BasisNumbering,
    pub g: GFn,
    pub nonempty: CeSet,
    /// Symbolic tier: membership semi-decider on `pair(handle, basis index)`.
    pub symbolic_membership: Option<ProgramIndex>,
    /// Where the space came from, for reports.
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("operation requires the explicit-finite tier")]
    NotExplicit,
    #[error("unknown point id {0}")]
    BadPoint(PointId),
}

/// Verdict plus evidence for the effectively-enumerable-space check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EeVerdict {
    Verified {
        /// Points lying in no basic open (reported, not failed).
        uncovered_points: Vec<PointId>,
    },
    RefutedIntersection {
        i: Nat,
        j: Nat,
        n: Nat,
        k: Nat,
        reason: String,
    },
    RefutedNonempty {
        index: Nat,
        reason: String,
    },
    RefutedT0 {
        x: PointId,
        y: PointId,
    },
    Unknown {
        i: Nat,
        j: Nat,
        reason: String,
    },
}

/// Exhaustively verifies the two clauses of the effective-enumerability
/// definition over the representative basis indices, plus the T0 axiom.
pub fn ee_space_check(space: &Space, budgets: Budgets) -> EeVerdict {
    if space.tier != SpaceTier::ExplicitFinite {
        return EeVerdict::Unknown {
            i: 0,
            j: 0,
            reason: "symbolic tier: universal clauses are not refutable".into(),
        };
    }
    let reps = space.basis.reps();
    // clause 1: intersections are unions along g
    for &i in reps {
        for &j in reps {
            let target: BTreeSet<PointId> = space
                .basis
                .eval(i)
                .intersection(&space.basis.eval(j))
                .copied()
                .collect();
            let mut union: BTreeSet<PointId> = BTreeSet::new();
            let cap = reps.len() as Nat + 2;
            let mut saturated = false;
            for n in 0..cap {
                let Some(k) = space.g.eval(i, j, n, budgets) else {
                    return EeVerdict::Unknown {
                        i,
                        j,
                        reason: format!("g diverged at n = {n}"),
                    };
                };
                let part = space.basis.eval(k);
                if !part.is_subset(&target) {
                    return EeVerdict::RefutedIntersection {
                        i,
                        j,
                        n,
                        k,
                        reason: "g produced a basic open outside the intersection".into(),
                    };
                }
                union.extend(part);
                if union == target {
                    saturated = true;
                    break;
                }
            }
            if !saturated && !union.eq(&target) {
                return EeVerdict::Unknown {
                    i,
                    j,
                    reason: format!("union did not saturate within {cap} terms"),
                };
            }
        }
    }
    // clause 2: nonemptiness indices form exactly the enumerated c.e. set
    let enumerated = space.nonempty.stage(budgets.stages);
    for &i in reps {
        let really = !space.basis.eval(i).is_empty();
        let listed = enumerated.contains(&i);
        if listed && !really {
            return EeVerdict::RefutedNonempty {
                index: i,
                reason: "enumerates an index whose basic open is empty".into(),
            };
        }
        if really && !listed {
            return EeVerdict::RefutedNonempty {
                index: i,
                reason: "missing a nonempty index at budget".into(),
            };
        }
    }
    // T0: distinct points have distinct profiles
    for x in 0..space.points.len() {
        for y in x + 1..space.points.len() {
            let same = reps.iter().all(|&i| {
                let a = space.basis.eval(i);
                a.contains(&x) == a.contains(&y)
            });
            if same {
                return EeVerdict::RefutedT0 { x, y };
            }
        }
    }
    let uncovered = (0..space.points.len())
        .filter(|p| reps.iter().all(|&i| !space.basis.eval(i).contains(p)))
        .collect();
    EeVerdict::Verified {
        uncovered_points: uncovered,
    }
}

/// The set an effectively open set denotes, without saturation-stage
/// bookkeeping; the workhorse for inner loops.
pub fn eff_open_points(space: &Space, o: &EffOpenSet, budgets: Budgets) -> BTreeSet<PointId> {
    let indices = o
        .index_set
        .limit_if_finite()
        .unwrap_or_else(|| o.index_set.stage(budgets.stages));
    indices.iter().flat_map(|&i| space.basis.eval(i)).collect()
}

/// The set an effectively open set denotes, with the saturation stage.
///
/// Structurally finite index sets denote exactly (a finite list of indices
/// is decidable, whatever their size); program-backed ones saturate at the
/// stage budget. The saturation stage is the least stage whose presentation
/// already covers the full denotation, found by doubling then bisecting.
pub fn eff_open_denotation(
    space: &Space,
    o: &EffOpenSet,
    budgets: Budgets,
) -> (BTreeSet<PointId>, Nat) {
    let denote = |s: Nat| -> BTreeSet<PointId> {
        o.index_set
            .stage(s)
            .iter()
            .flat_map(|&i| space.basis.eval(i))
            .collect()
    };
    let full: BTreeSet<PointId> = match o.index_set.limit_if_finite() {
        Some(limit) => limit.iter().flat_map(|&i| space.basis.eval(i)).collect(),
        None => denote(budgets.stages),
    };
    let mut hi = budgets.stages.max(1);
    while denote(hi) != full {
        match hi.checked_mul(2) {
            Some(next) => hi = next,
            None => break,
        }
    }
    let mut lo = 0;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if denote(mid) == full {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    (full, lo)
}

/// The principal numbering of effectively open sets:
/// `α^e(n) = ∪_{k ∈ W_n} α(k)`.
pub fn principal_open_numbering(space: &Space, n: Nat, budgets: Budgets) -> BTreeSet<PointId> {
    let o = EffOpenSet {
        index_set: CeSet::program(ProgramIndex::from(n)),
    };
    eff_open_denotation(space, &o, budgets).0
}

/// Specialisation order on the explicit tier: every basic open containing
/// `x` contains `y`.
pub fn specialization_leq(space: &Space, x: PointId, y: PointId) -> Result<bool, SpaceError> {
    if space.tier != SpaceTier::ExplicitFinite {
        return Err(SpaceError::NotExplicit);
    }
    if x >= space.points.len() || y >= space.points.len() {
        return Err(SpaceError::BadPoint(x.max(y)));
    }
    Ok(space.basis.reps().iter().all(|&i| {
        let a = space.basis.eval(i);
        !a.contains(&x) || a.contains(&y)
    }))
}

/// The basic-open membership profile of a point: its A-set over the
/// representative indices.
pub fn point_profile(space: &Space, x: PointId) -> BTreeSet<Nat> {
    space
        .basis
        .reps()
        .iter()
        .copied()
        .filter(|&i| space.basis.eval(i).contains(&x))
        .collect()
}

/// The canonical point numbering of an explicit finite space: a total
/// computable surjection onto the points. On a finite explicit space any two
/// such numberings are computably equivalent, so index-set statements do not
/// depend on the choice.
pub fn point_of_index(space: &Space, k: Nat) -> PointId {
    (k % space.points.len() as Nat) as usize
}

/// The A-set of a point as a computable element (profile over reps; every
/// other index does not contain the point by construction).
pub fn computable_element(space: &Space, x: PointId) -> ComputableElement {
    ComputableElement {
        a_x: CeSet::Finite(point_profile(space, x)),
    }
}

/// Membership semi-decision on the symbolic tier.
pub fn symbolic_membership(
    space: &Space,
    handle: Nat,
    basis_index: Nat,
    budgets: Budgets,
) -> Option<bool> {
    let e = space.symbolic_membership.as_ref()?;
    let p = decode_program(e);
    match run(&p, pair(handle, basis_index), budgets.steps) {
        EvalResult::Halted(0) => Some(false),
        EvalResult::Halted(_) => Some(true),
        EvalResult::Exhausted => None,
    }
}

/// Dn-coded basis evaluation helper shared by family-derived spaces: the
/// basic open at index `n` collects the members containing `D_n`.
pub fn dn_basis_table(members: &[BTreeSet<Nat>]) -> (BTreeMap<Nat, BTreeSet<PointId>>, Nat) {
    let universe: BTreeSet<Nat> = members.iter().flatten().copied().collect();
    let width = universe.iter().max().map(|m| m + 1).unwrap_or(0);
    let bound = 1u64 << width.min(20);
    let mut table = BTreeMap::new();
    let mut empty_rep = bound;
    for n in 0..bound {
        let dn = dn_decode(n);
        let set: BTreeSet<PointId> = members
            .iter()
            .enumerate()
            .filter(|(_, m)| dn.is_subset(m))
            .map(|(i, _)| i)
            .collect();
        if set.is_empty() && empty_rep == bound {
            empty_rep = n;
        }
        if !set.is_empty() {
            table.insert(n, set);
        }
    }
    (table, empty_rep)
}

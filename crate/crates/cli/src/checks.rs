//! Named checks runnable from `sl2var check`.

use sl2var::actions::torsion_triviality_check;
use sl2var::linearize::{self as lin, verify_certificate};
use sl2var::presentation::{Action, ActionKind, GroupAction};
use sl2var::report::{CheckReport, RelationReport};
use sl2var::{Error, Result};

pub const STEINBERG_RELATIONS: &str = "steinberg-relations";
pub const BRACKET_RELATIONS: &str = "bracket-relations";
pub const TORSION: &str = "torsion";

pub struct CheckInfo {
    pub name: &'static str,
    pub kind: ActionKind,
    pub statement: &'static str,
}

pub const CHECKS: &[CheckInfo] = &[
    CheckInfo {
        name: STEINBERG_RELATIONS,
        kind: ActionKind::Group,
        statement: "the images of u and w satisfy the defining relations of SL2(K) for every pair of scalars",
    },
    CheckInfo {
        name: BRACKET_RELATIONS,
        kind: ActionKind::Lie,
        statement: "the images of x and y are additive in the scalar and satisfy the sl2(K) bracket relations",
    },
    CheckInfo {
        name: TORSION,
        kind: ActionKind::Group,
        statement: "in characteristic p, a module without p-torsion is trivial (group case: when u - 1 is nilpotent)",
    },
    CheckInfo {
        name: TORSION,
        kind: ActionKind::Lie,
        statement: "in characteristic p, a module without p-torsion is trivial",
    },
    CheckInfo {
        name: lin::CHECK_V1,
        kind: ActionKind::Group,
        statement: "char K != 2, |K| > 3, U-length <= 2: G centralizes C_V(i)",
    },
    CheckInfo {
        name: lin::CHECK_V2,
        kind: ActionKind::Group,
        statement: "as v1 with U-length 2 and C_V(G) = 0: ker and image of u_l - 1 equal C_V(U) and [U,V] for all l != 0",
    },
    CheckInfo {
        name: lin::CHECK_V3,
        kind: ActionKind::Group,
        statement: "as v1: V = C_V(G) + [G,V] with [G,V] a direct sum of natural modules (certificate verified)",
    },
    CheckInfo {
        name: lin::CHECK_V4,
        kind: ActionKind::Group,
        statement: "char K != 2 and (u - 1)^k = 0: (u_l - 1)^(2k-1) = 0 for every l (k from --k)",
    },
    CheckInfo {
        name: lin::CHECK_V5,
        kind: ActionKind::Group,
        statement: "scalars are integer multiples of squares and (u - 1)^k = 0: (u_l - 1)^k = 0 for every l",
    },
    CheckInfo {
        name: lin::CHECK_V6,
        kind: ActionKind::Group,
        statement: "(u_l - 1)^n = 0 for all l and V is n!-torsion-free: U-length <= n (n from --n)",
    },
    CheckInfo {
        name: lin::CHECK_V7,
        kind: ActionKind::Group,
        statement: "char K not 2 or 3 and (u - 1)^2 = 0 for the single element u: U-length <= 2, then linearize",
    },
    CheckInfo {
        name: lin::CHECK_V8,
        kind: ActionKind::Group,
        statement: "simple quadratic module, char K != 2, |K| > 3: x_l = u_l - 1, y_l = w x_l w is an sl2(K) action with x_l x_m = 0",
    },
    CheckInfo {
        name: lin::CHECK_V9,
        kind: ActionKind::Lie,
        statement: "char K != 2 and x^2 = 0: x_l x_m = 0 for all l, m",
    },
    CheckInfo {
        name: lin::CHECK_V10,
        kind: ActionKind::Lie,
        statement: "char K != 2 and x^2 = 0: ker x_l and im x_l do not depend on l != 0",
    },
    CheckInfo {
        name: lin::CHECK_V11_12,
        kind: ActionKind::Lie,
        statement: "char K not 2 or 3 and x^2 = 0: V = Ann_V + (E_-1 + E_1), the second part a sum of natural modules",
    },
    CheckInfo {
        name: lin::CHECK_V13,
        kind: ActionKind::Lie,
        statement: "char K = 3, x^2 = 0, V simple: h_l and x_l are K-linear, y_l at least on E_1",
    },
    CheckInfo {
        name: lin::CHECK_V14,
        kind: ActionKind::Lie,
        statement: "char K = 3 and x^2 = y^2 = 0: V = Ann_V + g.V with g.V a sum of natural modules",
    },
];

/// Names applicable to the kind, in registry order.
pub fn names_for(kind: ActionKind) -> Vec<&'static str> {
    CHECKS.iter().filter(|c| c.kind == kind).map(|c| c.name).collect()
}

pub fn is_known(name: &str) -> bool {
    CHECKS.iter().any(|c| c.name == name)
}

/// Parameters for the length-bound checks; `None` picks the smallest valid value.
#[derive(Clone, Copy, Debug, Default)]
pub struct Params {
    pub k: Option<u32>,
    pub n: Option<u32>,
}

fn relation_report(name: &str, r: &RelationReport) -> CheckReport {
    let mut out = CheckReport::pass(name).with_detail(format!("{} relation instances", r.instances));
    for f in &r.failures {
        out.require(false, || format!("{} fails at ({})", f.relation, f.witness.join(", ")));
    }
    out
}

// Smallest k with (u_l - 1)^k = 0 for every l in `scalars`.
fn nilpotency_index(a: &GroupAction, all_scalars: bool) -> Option<u32> {
    let f = a.field();
    let scalars: Vec<_> = if all_scalars { f.elements().collect() } else { vec![f.one()] };
    let bound = a.module().rank() as u32 * 64 + 1;
    (1..=bound).find(|&k| scalars.iter().all(|&l| a.delta(l).power(k).map(|p| p.is_zero()).unwrap_or(false)))
}

fn not_nilpotent(check: &str) -> Error {
    Error::Hypothesis { check: check.into(), reason: "u - 1 is not nilpotent".into() }
}

fn certified(name: &str, cert: Result<lin::LinearizationCertificate>, action: &Action) -> Result<CheckReport> {
    let cert = cert?;
    let mut r = verify_certificate(&cert, action);
    r.check = name.to_string();
    Ok(r.with_detail(format!(
        "{} natural summands, trivial part of order {}",
        cert.summands().len(),
        cert.trivial_part().order()
    )))
}

/// Run one named check.
pub fn run(name: &str, action: &Action, params: Params) -> Result<CheckReport> {
    let info = CHECKS
        .iter()
        .find(|c| c.name == name && c.kind == action.kind())
        .ok_or_else(|| Error::KindMismatch(format!("check `{name}` does not apply to {} actions", action.kind().as_str())))?;
    match action {
        Action::Group(a) => run_group(info.name, a, action, params),
        Action::Lie(l) => {
            let r = match info.name {
                BRACKET_RELATIONS => relation_report(BRACKET_RELATIONS, &l.lie_verify()),
                TORSION => torsion_triviality_check(action),
                lin::CHECK_V9 => lin::lie_quadratic_propagation(l)?.products,
                lin::CHECK_V10 => lin::lie_quadratic_propagation(l)?.kernels,
                lin::CHECK_V11_12 => certified(lin::CHECK_V11_12, lin::linearize_lie_quadratic(l), action)?,
                lin::CHECK_V13 => lin::char3_partial_structure(l)?.report,
                lin::CHECK_V14 => certified(lin::CHECK_V14, lin::char3_biquadratic(l), action)?,
                other => unreachable!("registry lists {other} for Lie actions"),
            };
            Ok(r)
        }
    }
}

fn run_group(name: &str, a: &GroupAction, action: &Action, params: Params) -> Result<CheckReport> {
    Ok(match name {
        STEINBERG_RELATIONS => relation_report(STEINBERG_RELATIONS, &a.steinberg_verify()),
        TORSION => torsion_triviality_check(action),
        lin::CHECK_V1 => lin::check_variation1(a)?,
        lin::CHECK_V2 => lin::check_centralizer_coherence(a)?,
        lin::CHECK_V3 => certified(lin::CHECK_V3, lin::linearize_group_quadratic(a), action)?,
        lin::CHECK_V4 => {
            let k = params.k.or_else(|| nilpotency_index(a, false)).ok_or_else(|| not_nilpotent(name))?;
            lin::length_bound_4(a, k)?.with_detail(format!("k = {k}"))
        }
        lin::CHECK_V5 => {
            let k = params.k.or_else(|| nilpotency_index(a, false)).ok_or_else(|| not_nilpotent(name))?;
            lin::length_bound_5(a, k)?.with_detail(format!("k = {k}"))
        }
        lin::CHECK_V6 => {
            let n = params.n.or_else(|| nilpotency_index(a, true)).ok_or_else(|| not_nilpotent(name))?;
            lin::length_bound_6(a, n)?.with_detail(format!("n = {n}"))
        }
        lin::CHECK_V7 => lin::single_element_quadratic(a)?.report,
        lin::CHECK_V8 => {
            let l = lin::derive_lie_action(a)?;
            let trivial = l.generators().iter().all(|g| g.is_zero());
            CheckReport::pass(lin::CHECK_V8).with_detail(if trivial {
                "i centralizes V: the derived Lie action is trivial"
            } else {
                "derived Lie action passes the bracket relations with x_l x_m = 0"
            })
        }
        other => unreachable!("registry lists {other} for group actions"),
    })
}

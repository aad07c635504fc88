//! Runs the structural checks on an instance and assembles a report.
//!
//! Checks run in a fixed order and every row records whether its hypotheses
//! hold, so a conclusion is never reported as verified outside them.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, MagnusError};
use crate::groupalg::{ext, ext_induced, free_resolution, induced_map, long_exact_sequence, AModule, GroupAlgebra};
use crate::instance::{GroupSpec, Instance, Limits};
use crate::invariants::{
    first_cohomology, invariants_direct, invariants_filtration, lambda_power, order_lowering, restriction_check, Filtration,
    Representation,
};
use crate::magnus::{graded_dims, monomial_count};
use crate::words::hom_space;

pub const SCHEMA_VERSION: u32 = 1;

/// Finite groups above this order skip the resolution-based checks.
pub const EXT_ORDER_CAP: usize = 128;

/// `Λ^q` is skipped when its target would have more rows than this.
pub const LAMBDA_ROW_CAP: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Violated,
    Observation,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Violated => "violated",
            Status::Observation => "observation",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisStatus {
    /// The check has no hypotheses beyond a valid instance.
    None,
    Holds,
    Fails,
    /// Required but not verified by the tool.
    Assumed,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hypothesis {
    pub status: HypothesisStatus,
    pub detail: String,
}

impl Hypothesis {
    fn none() -> Self {
        Hypothesis { status: HypothesisStatus::None, detail: String::new() }
    }

    fn new(holds: bool, detail: impl Into<String>) -> Self {
        let status = if holds { HypothesisStatus::Holds } else { HypothesisStatus::Fails };
        Hypothesis { status, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub statement: &'static str,
    pub hypothesis: Hypothesis,
    pub status: Status,
    pub details: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceEcho {
    pub name: String,
    pub field: String,
    pub group: GroupSpec,
    pub group_order: Option<usize>,
    pub representation_dim: usize,
    pub subgroup: Option<Vec<String>>,
    pub limits: Limits,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedTable {
    /// `"aug_power"` for finite groups, `"magnus"` otherwise.
    pub source: &'static str,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tables {
    /// `dim H_q^0(Γ, V)` for `q = 0..=q_max`.
    pub filtration_dims: Vec<usize>,
    /// `dim H̄_q`.
    pub graded_piece_dims: Vec<usize>,
    pub fixed_dim: usize,
    /// `dim Hom(Γ, R)`.
    pub hom_dim: usize,
    /// `dim H¹(Γ, V)` through Fox calculus.
    pub h1_dim: usize,
    /// `N(q)`; absent when the computation hit a resource cap.
    pub graded_algebra: Option<GradedTable>,
    /// `dim Ext^p(A/I^{q+1}, V)`, rows indexed by `q`, columns by `p`.
    pub ext: Option<Vec<Vec<usize>>>,
    /// Matrices of `Λ_q`, `q = 1..=q_max`, entries as strings.
    pub lambda: Vec<Vec<Vec<String>>>,
    /// Filtration dimensions for the subgroup, when one is given.
    pub subgroup_filtration_dims: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub instance: InstanceEcho,
    pub tables: Tables,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn has_violation(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Violated)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Plain-text rendering: tables followed by one line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let t = &self.tables;
        let _ = writeln!(out, "instance {} over {}", self.instance.name, self.instance.field);
        if let Some(n) = self.instance.group_order {
            let _ = writeln!(out, "group order        {n}");
        }
        let _ = writeln!(out, "dim V              {}", self.instance.representation_dim);
        let _ = writeln!(out, "dim H_q^0          {}", join(&t.filtration_dims));
        let _ = writeln!(out, "graded pieces      {}", join(&t.graded_piece_dims));
        let _ = writeln!(out, "dim Hom(G,R)       {}", t.hom_dim);
        let _ = writeln!(out, "dim H^1(G,V)       {}", t.h1_dim);
        match &t.graded_algebra {
            Some(g) => {
                let _ = writeln!(out, "N(q) [{}]{}{}", g.source, " ".repeat(10usize.saturating_sub(g.source.len())), join(&g.dims));
            }
            None => {
                let _ = writeln!(out, "N(q)               (resource cap)");
            }
        }
        if let Some(ext) = &t.ext {
            for (q, row) in ext.iter().enumerate() {
                let _ = writeln!(out, "Ext^p(A/I^{}, V)    {}", q + 1, join(row));
            }
        }
        if let Some(s) = &t.subgroup_filtration_dims {
            let _ = writeln!(out, "subgroup H_q^0     {}", join(s));
        }
        out.push('\n');
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(out, "{:<11} {:<width$}  {}", c.status.as_str(), c.id, c.details);
        }
        let _ = writeln!(
            out,
            "\n{} verified, {} violated, {} observation, {} skipped",
            self.count(Status::Verified),
            self.count(Status::Violated),
            self.count(Status::Observation),
            self.count(Status::Skipped)
        );
        out
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

struct Ctx<'a> {
    inst: &'a Instance,
    rep: &'a Representation,
    q_max: usize,
    p_max: usize,
    filtration: Filtration,
    graded: Vec<usize>,
    fixed_dim: usize,
    hom_dim: usize,
    h1_dim: usize,
    n_q: Result<Vec<usize>, String>,
    magnus_n_q: Option<Result<Vec<usize>, String>>,
    /// Finite group algebra, when resolutions are within budget.
    alg: Option<GroupAlgebra>,
    ext_table: Option<Result<Vec<Vec<usize>>, String>>,
}

fn cap_message(e: &MagnusError) -> String {
    format!("resource cap: {e}")
}

fn magnus_dims(inst: &Instance, rep: &Representation) -> Result<Vec<usize>, String> {
    let degree = inst.limits().magnus_degree();
    graded_dims(rep.presentation(), inst.field, degree, inst.memory_cap)
        .map(|g| g.as_slice().to_vec())
        .map_err(|e| cap_message(&e))
}

/// `dim Ext^p(A/I^k, V)` for `p ≤ p_max`.
fn ext_dims_of_quotient(alg: &GroupAlgebra, k: usize, v: &AModule, p_max: usize) -> Result<Vec<usize>, Error> {
    let chain = alg.aug_powers(k);
    let (m, _) = AModule::regular(alg.clone()).subquotient(&chain[0], &chain[k])?;
    let res = free_resolution(&m, p_max + 1);
    (0..=p_max).map(|p| ext(&res, v, p).map(|e| e.dim())).collect()
}

impl<'a> Ctx<'a> {
    fn new(inst: &'a Instance) -> Self {
        let rep = &inst.representation;
        let limits = inst.limits();
        let q_max = limits.q_max;
        let filtration = invariants_filtration(rep, q_max);
        let graded = filtration.graded_dims();
        let fixed_dim = filtration.term(0).dim();
        let hom_dim = hom_space(rep.presentation(), inst.field).dim();
        let h1_dim = first_cohomology(rep).dim();
        let alg = inst.algebra();
        let (n_q, magnus_n_q) = match &alg {
            Some(a) => {
                let degree = limits.magnus_degree().max(q_max);
                (Ok(a.graded_dims(degree).as_slice().to_vec()), Some(magnus_dims(inst, rep)))
            }
            None => (magnus_dims(inst, rep), None),
        };
        let alg = alg.filter(|a| a.dim() <= EXT_ORDER_CAP);
        let ext_table = alg.as_ref().map(|a| {
            let v = rep.module().expect("finite instances carry a module");
            (0..=q_max)
                .map(|q| ext_dims_of_quotient(a, q + 1, v, limits.p_max))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())
        });
        Ctx {
            inst,
            rep,
            q_max,
            p_max: limits.p_max,
            filtration,
            graded,
            fixed_dim,
            hom_dim,
            h1_dim,
            n_q,
            magnus_n_q,
            alg,
            ext_table,
        }
    }

    fn finite_skip(&self) -> Option<String> {
        match (self.inst.finite_group(), &self.alg) {
            (None, _) => Some("needs a finite group".into()),
            (Some(g), None) => Some(format!("resource cap: group order {} exceeds {EXT_ORDER_CAP}", g.order())),
            _ => None,
        }
    }
}

fn row(
    id: &'static str,
    statement: &'static str,
    hypothesis: Hypothesis,
    status: Status,
    details: impl Into<String>,
) -> CheckResult {
    CheckResult { id, statement, hypothesis, status, details: details.into() }
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Verified
    } else {
        Status::Violated
    }
}

/// Runs every check on `inst`.
pub fn run_checks(inst: &Instance) -> Report {
    let ctx = Ctx::new(inst);
    let checks = vec![
        check_relators(&ctx),
        check_filtration_structure(&ctx),
        check_filtration_oracle(&ctx),
        check_graded_cross(&ctx),
        check_h1_cross(&ctx),
        check_lambda_injective(&ctx),
        check_lambda_homomorphism(&ctx),
        check_lambda_power(&ctx),
        check_no_higher_invariants(&ctx),
        check_left_exact_bound(&ctx),
        check_graded_equality(&ctx),
        check_ext_zero(&ctx),
        check_acyclic_vanishing(&ctx),
        check_duality(&ctx),
        check_zero_map(&ctx),
        check_long_exact_sequence(&ctx),
        check_restriction(&ctx),
    ];
    let lambda = (1..=ctx.q_max)
        .filter_map(|q| order_lowering(ctx.rep, &ctx.filtration, q).ok())
        .map(|l| l.matrix.to_strings())
        .collect();
    let subgroup_filtration_dims = inst
        .subgroup
        .as_ref()
        .and_then(|w| restriction_check(ctx.rep, w, ctx.q_max).ok())
        .map(|r| r.subgroup_dims);
    let source = if inst.finite_group().is_some() { "aug_power" } else { "magnus" };
    let tables = Tables {
        filtration_dims: ctx.filtration.dims(),
        graded_piece_dims: ctx.graded.clone(),
        fixed_dim: ctx.fixed_dim,
        hom_dim: ctx.hom_dim,
        h1_dim: ctx.h1_dim,
        graded_algebra: ctx.n_q.as_ref().ok().map(|d| GradedTable { source, dims: d.clone() }),
        ext: ctx.ext_table.as_ref().and_then(|t| t.as_ref().ok().cloned()),
        lambda,
        subgroup_filtration_dims,
    };
    let instance = InstanceEcho {
        name: inst.spec.name.clone(),
        field: inst.field.tag(),
        group: inst.spec.group.clone(),
        group_order: inst.finite_group().map(|g| g.order()),
        representation_dim: ctx.rep.dim(),
        subgroup: inst.spec.subgroup.as_ref().map(|s| s.generators.clone()),
        limits: inst.spec.limits.clone(),
    };
    Report { schema_version: SCHEMA_VERSION, tool_version: env!("CARGO_PKG_VERSION"), instance, tables, checks }
}

fn check_relators(ctx: &Ctx) -> CheckResult {
    let id = crate::linalg::Matrix::identity(ctx.inst.field, ctx.rep.dim());
    let bad: Vec<String> = ctx
        .rep
        .presentation()
        .relators()
        .iter()
        .filter(|r| ctx.rep.eval(r) != id)
        .map(|r| ctx.rep.presentation().display_word(r))
        .collect();
    let n = ctx.rep.presentation().relators().len();
    row(
        "representation.relators",
        "every relator acts as the identity on V",
        Hypothesis::none(),
        verdict(bad.is_empty()),
        if bad.is_empty() { format!("{n} relators") } else { format!("failing: {}", bad.join(", ")) },
    )
}

fn check_filtration_structure(ctx: &Ctx) -> CheckResult {
    let f = &ctx.filtration;
    let nested = f.is_nested();
    let stable = f.is_stable(ctx.rep.generators());
    let stabilizes = f.stabilizes_once_equal();
    row(
        "filtration.structure",
        "H_q^0 is nested, G-stable, and constant once two consecutive terms agree",
        Hypothesis::none(),
        verdict(nested && stable && stabilizes),
        format!("dims {}; nested {nested}, stable {stable}, stabilizes {stabilizes}", join(&f.dims())),
    )
}

fn check_filtration_oracle(ctx: &Ctx) -> CheckResult {
    let statement = "recursive kernels agree with the annihilator of a basis of I^(q+1)";
    if ctx.inst.finite_group().is_none() {
        return row("filtration.oracle", statement, Hypothesis::none(), Status::Skipped, "needs a finite group");
    }
    let mut mismatches = Vec::new();
    for q in 0..=ctx.q_max {
        match invariants_direct(ctx.rep, q) {
            Ok(h) if &h == ctx.filtration.term(q) => {}
            Ok(_) => mismatches.push(q.to_string()),
            Err(e) => return row("filtration.oracle", statement, Hypothesis::none(), Status::Violated, e.to_string()),
        }
    }
    let details = if mismatches.is_empty() {
        format!("equal for q <= {}", ctx.q_max)
    } else {
        format!("differ at q = {}", mismatches.join(", "))
    };
    row("filtration.oracle", statement, Hypothesis::none(), verdict(mismatches.is_empty()), details)
}

fn check_graded_cross(ctx: &Ctx) -> CheckResult {
    let statement = "N(q) from Magnus truncation agrees with dim I^q/I^(q+1) in the group algebra";
    let id = "graded.cross_oracle";
    match (&ctx.n_q, &ctx.magnus_n_q) {
        (Err(e), _) => row(id, statement, Hypothesis::none(), Status::Skipped, e.clone()),
        (Ok(_), None) => {
            row(id, statement, Hypothesis::none(), Status::Skipped, "needs a finite group for the second route")
        }
        (Ok(_), Some(Err(e))) => row(id, statement, Hypothesis::none(), Status::Skipped, e.clone()),
        (Ok(direct), Some(Ok(magnus))) => {
            let len = magnus.len().min(direct.len());
            let ok = direct[..len] == magnus[..len];
            row(
                id,
                statement,
                Hypothesis::none(),
                verdict(ok),
                format!("aug_power {} / magnus {}", join(&direct[..len]), join(&magnus[..len])),
            )
        }
    }
}

fn check_h1_cross(ctx: &Ctx) -> CheckResult {
    let statement = "H^1(G,V) from Fox calculus agrees with Ext^1(A/I, V)";
    let id = "cohomology.h1_cross_oracle";
    if let Some(reason) = ctx.finite_skip() {
        return row(id, statement, Hypothesis::none(), Status::Skipped, reason);
    }
    match ctx.ext_table.as_ref().expect("finite") {
        Err(e) => row(id, statement, Hypothesis::none(), Status::Violated, e.clone()),
        Ok(_) if ctx.p_max == 0 => row(id, statement, Hypothesis::none(), Status::Skipped, "needs p_max >= 1"),
        Ok(t) => {
            let ext1 = t[0][1];
            row(
                id,
                statement,
                Hypothesis::none(),
                verdict(ext1 == ctx.h1_dim),
                format!("fox {} / ext {}", ctx.h1_dim, ext1),
            )
        }
    }
}

fn check_lambda_injective(ctx: &Ctx) -> CheckResult {
    let statement = "the order-lowering operator is injective on every graded piece";
    let mut failing = Vec::new();
    for q in 1..=ctx.q_max {
        match order_lowering(ctx.rep, &ctx.filtration, q) {
            Ok(l) if l.injective => {}
            Ok(_) => failing.push(q.to_string()),
            Err(e) => return row("lambda.injective", statement, Hypothesis::none(), Status::Violated, e.to_string()),
        }
    }
    let details = if failing.is_empty() {
        format!("q = 1..{}", ctx.q_max)
    } else {
        format!("not injective at q = {}", failing.join(", "))
    };
    row("lambda.injective", statement, Hypothesis::none(), verdict(failing.is_empty()), details)
}

fn check_lambda_homomorphism(ctx: &Ctx) -> CheckResult {
    let statement = "each order-lowered value is a homomorphism: exponent-weighted sums vanish on relators";
    let mut failing = Vec::new();
    for q in 1..=ctx.q_max {
        match order_lowering(ctx.rep, &ctx.filtration, q) {
            Ok(l) if l.relator_consistent => {}
            Ok(_) => failing.push(q.to_string()),
            Err(e) => return row("lambda.homomorphism", statement, Hypothesis::none(), Status::Violated, e.to_string()),
        }
    }
    let details = if failing.is_empty() {
        format!("{} relators, q = 1..{}", ctx.rep.presentation().relators().len(), ctx.q_max)
    } else {
        format!("relator condition fails at q = {}", failing.join(", "))
    };
    row("lambda.homomorphism", statement, Hypothesis::none(), verdict(failing.is_empty()), details)
}

fn check_lambda_power(ctx: &Ctx) -> CheckResult {
    let statement = "the iterated operator embeds the q-th graded piece into Hom(G,R)^(tensor q) tensor V^G";
    let id = "lambda.power";
    let hyp = Hypothesis::new(true, "R is a field, G finitely generated, dim V finite");
    let mut details = Vec::new();
    let mut ok = true;
    for q in 1..=ctx.q_max {
        let rows = (ctx.hom_dim as u128).pow(q as u32) * ctx.fixed_dim as u128;
        let bound_ok = (ctx.graded[q] as u128) <= rows;
        if rows > LAMBDA_ROW_CAP as u128 {
            ok &= bound_ok;
            details.push(format!("q={q}: {} <= {rows} (map skipped: resource cap)", ctx.graded[q]));
            continue;
        }
        match lambda_power(ctx.rep, &ctx.filtration, q) {
            Ok(lp) => {
                ok &= lp.injective && bound_ok;
                details.push(format!("q={q}: {} <= {rows}{}", ctx.graded[q], if lp.injective { "" } else { " not injective" }));
            }
            Err(e) => {
                ok = false;
                details.push(format!("q={q}: {e}"));
            }
        }
    }
    row(id, statement, hyp, verdict(ok), details.join("; "))
}

fn check_no_higher_invariants(ctx: &Ctx) -> CheckResult {
    let statement = "if Hom(G,R) = H^1(G,R) = 0 then H_q^0 = V^G for all q";
    let id = "invariants.no_higher";
    let h1_trivial = first_cohomology(&Representation::trivial(ctx.rep.presentation().clone(), ctx.inst.field, 1)).dim();
    let holds = ctx.hom_dim == 0 && h1_trivial == 0;
    let hyp = Hypothesis::new(holds, format!("dim Hom(G,R) = {}, dim H^1(G,R) = {h1_trivial}", ctx.hom_dim));
    if !holds {
        return row(id, statement, hyp, Status::Skipped, "hypothesis fails");
    }
    let constant = ctx.filtration.dims().iter().all(|&d| d == ctx.fixed_dim);
    row(id, statement, hyp, verdict(constant), format!("dims {}", join(&ctx.filtration.dims())))
}

fn check_left_exact_bound(ctx: &Ctx) -> CheckResult {
    let statement = "dim of the q-th graded piece <= N(q) dim V^G";
    let id = "graded.left_exact_bound";
    let n_q = match &ctx.n_q {
        Ok(n) => n,
        Err(e) => return row(id, statement, Hypothesis::none(), Status::Skipped, e.clone()),
    };
    let top = ctx.q_max.min(n_q.len() - 1);
    let ok = (1..=top).all(|q| ctx.graded[q] <= n_q[q] * ctx.fixed_dim);
    let pairs: Vec<String> = (1..=top).map(|q| format!("{}<={}", ctx.graded[q], n_q[q] * ctx.fixed_dim)).collect();
    row(id, statement, Hypothesis::none(), verdict(ok), format!("q = 1..{top}: {}", pairs.join(" ")))
}

fn check_graded_equality(ctx: &Ctx) -> CheckResult {
    let statement = "if H^1(G,V) = 0 then dim of the q-th graded piece = N(q) dim V^G";
    let id = "graded.equality";
    let holds = ctx.h1_dim == 0;
    let hyp = Hypothesis::new(holds, format!("dim H^1(G,V) = {}", ctx.h1_dim));
    let n_q = match &ctx.n_q {
        Ok(n) => n,
        Err(e) => return row(id, statement, hyp, Status::Skipped, e.clone()),
    };
    let top = ctx.q_max.min(n_q.len() - 1);
    let ok = (1..=top).all(|q| ctx.graded[q] == n_q[q] * ctx.fixed_dim);
    let pairs: Vec<String> = (1..=top).map(|q| format!("{}/{}", ctx.graded[q], n_q[q] * ctx.fixed_dim)).collect();
    let details = format!("q = 1..{top}: {}{}", pairs.join(" "), if ok { "" } else { " (unequal)" });
    let status = if holds { verdict(ok) } else { Status::Observation };
    row(id, statement, hyp, status, details)
}

fn check_ext_zero(ctx: &Ctx) -> CheckResult {
    let statement = "Ext^0(A/I^(q+1), V) has the dimension of H_q^0";
    let id = "ext.degree_zero";
    if let Some(reason) = ctx.finite_skip() {
        return row(id, statement, Hypothesis::none(), Status::Skipped, reason);
    }
    match ctx.ext_table.as_ref().expect("finite") {
        Err(e) => row(id, statement, Hypothesis::none(), Status::Violated, e.clone()),
        Ok(t) => {
            let ext0: Vec<usize> = t.iter().map(|r| r[0]).collect();
            let ok = ext0 == ctx.filtration.dims();
            row(id, statement, Hypothesis::none(), verdict(ok), format!("ext {} / filtration {}", join(&ext0), join(&ctx.filtration.dims())))
        }
    }
}

fn check_acyclic_vanishing(ctx: &Ctx) -> CheckResult {
    let statement = "if H^p(G,V) = 0 then H_q^p(G,V) = 0 for every q";
    let id = "ext.vanishing";
    if let Some(reason) = ctx.finite_skip() {
        return row(id, statement, Hypothesis::none(), Status::Skipped, reason);
    }
    let table = match ctx.ext_table.as_ref().expect("finite") {
        Err(e) => return row(id, statement, Hypothesis::none(), Status::Violated, e.clone()),
        Ok(t) => t,
    };
    let degrees: Vec<usize> = (0..=ctx.p_max).filter(|&p| table[0][p] == 0).collect();
    let hyp = Hypothesis::new(
        !degrees.is_empty(),
        format!("dim H^p(G,V) = {} for p = 0..{}", join(&table[0]), ctx.p_max),
    );
    if degrees.is_empty() {
        return row(id, statement, hyp, Status::Skipped, "no degree with H^p = 0");
    }
    let ok = degrees.iter().all(|&p| table.iter().all(|r| r[p] == 0));
    let listed: Vec<String> = degrees.iter().map(usize::to_string).collect();
    row(id, statement, hyp, verdict(ok), format!("p in {{{}}}, q <= {}", listed.join(","), ctx.q_max))
}

fn check_duality(ctx: &Ctx) -> CheckResult {
    let statement = "N(q) = dim Ext^1(A/I^q, R) for q >= 1";
    let id = "cohomology.duality";
    if let Some(reason) = ctx.finite_skip() {
        return row(id, statement, Hypothesis::none(), Status::Skipped, reason);
    }
    let alg = ctx.alg.as_ref().expect("finite");
    let n_q = ctx.n_q.as_ref().expect("finite groups always have N(q)");
    let trivial = AModule::trivial(alg.clone());
    let mut pairs = Vec::new();
    let mut ok = true;
    for q in 1..=ctx.q_max.max(1) {
        match ext_dims_of_quotient(alg, q, &trivial, 1) {
            Ok(d) => {
                ok &= d[1] == n_q[q];
                pairs.push(format!("{}/{}", n_q[q], d[1]));
            }
            Err(e) => return row(id, statement, Hypothesis::none(), Status::Violated, e.to_string()),
        }
    }
    row(id, statement, Hypothesis::none(), verdict(ok), format!("N/Ext^1: {}", pairs.join(" ")))
}

fn check_zero_map(ctx: &Ctx) -> CheckResult {
    let statement = "the map Ext^1(A/I^q, R) -> Ext^1(A/I^(q+1), R) is zero for q >= 1";
    let id = "cohomology.zero_map";
    if let Some(reason) = ctx.finite_skip() {
        return row(id, statement, Hypothesis::none(), Status::Skipped, reason);
    }
    let alg = ctx.alg.as_ref().expect("finite");
    let trivial = AModule::trivial(alg.clone());
    let chain = alg.aug_powers(ctx.q_max.max(1) + 1);
    let regular = AModule::regular(alg.clone());
    let mut shapes = Vec::new();
    let mut ok = true;
    for q in 1..=ctx.q_max.max(1) {
        let result = (|| -> Result<crate::linalg::Matrix, Error> {
            let (big, q_big) = regular.subquotient(&chain[0], &chain[q + 1])?;
            let (small, q_small) = regular.subquotient(&chain[0], &chain[q])?;
            let pi = induced_map(&q_big, &q_small)?;
            let r_big = free_resolution(&big, 2);
            let r_small = free_resolution(&small, 2);
            ext_induced(&r_big, &r_small, &pi, &trivial, 1)
        })();
        match result {
            Ok(m) => {
                ok &= m.is_zero();
                shapes.push(format!("q={q}: {}x{}{}", m.rows(), m.cols(), if m.is_zero() { " zero" } else { " nonzero" }));
            }
            Err(e) => return row(id, statement, Hypothesis::none(), Status::Violated, e.to_string()),
        }
    }
    row(id, statement, Hypothesis::none(), verdict(ok), shapes.join("; "))
}

fn check_long_exact_sequence(ctx: &Ctx) -> CheckResult {
    let statement = "the Ext sequence of 0 -> I^q/I^(q+1) -> A/I^(q+1) -> A/I^q -> 0 is exact, with Ext(I^q/I^(q+1), V) of dimension N(q) dim H^p(G,V)";
    let id = "ext.long_exact_sequence";
    if let Some(reason) = ctx.finite_skip() {
        return row(id, statement, Hypothesis::none(), Status::Skipped, reason);
    }
    let alg = ctx.alg.as_ref().expect("finite");
    let v = ctx.rep.module().expect("finite");
    let mut parts = Vec::new();
    let mut ok = true;
    for q in 1..=ctx.q_max.max(1) {
        match long_exact_sequence(alg, q, v, ctx.p_max) {
            Ok(les) => {
                let good = les.is_exact() && les.graded_term_matches();
                ok &= good;
                let mut s = format!("q={q}: {}", join(&les.node_dims()));
                for node in les.violations() {
                    let _ = write!(s, " [not exact at {}]", node.label());
                }
                if !les.graded_term_matches() {
                    s.push_str(" [graded term mismatch]");
                }
                parts.push(s);
            }
            Err(e) => return row(id, statement, Hypothesis::none(), Status::Violated, e.to_string()),
        }
    }
    row(id, statement, Hypothesis::none(), verdict(ok), parts.join("; "))
}

fn check_restriction(ctx: &Ctx) -> CheckResult {
    let statement = "restriction to a finite-index subgroup is injective on graded pieces when V is torsion-free";
    let id = "restriction.injective";
    let words = match &ctx.inst.subgroup {
        None => return row(id, statement, Hypothesis::none(), Status::Skipped, "no subgroup given"),
        Some(w) => w,
    };
    let char0 = ctx.inst.field.characteristic() == 0;
    let hyp = Hypothesis {
        status: if char0 { HypothesisStatus::Assumed } else { HypothesisStatus::Fails },
        detail: if char0 {
            "finite index assumed, not checked; torsion-free in characteristic 0".into()
        } else {
            format!("finite index assumed, not checked; characteristic {} is torsion", ctx.inst.field.characteristic())
        },
    };
    match restriction_check(ctx.rep, words, ctx.q_max) {
        Ok(r) => {
            let ok = r.contained && r.all_injective();
            let details = format!(
                "graded dims {} vs {}; injective {}",
                join(&r.group_dims),
                join(&r.subgroup_dims),
                ok
            );
            let status = if char0 { verdict(ok) } else { Status::Observation };
            row(id, statement, hyp, status, details)
        }
        Err(e) => row(id, statement, hyp, Status::Violated, e.to_string()),
    }
}

/// Bound on the monomial count used by the Magnus route, for reporting.
pub fn magnus_monomials(inst: &Instance) -> u128 {
    monomial_count(inst.presentation().num_generators(), inst.limits().magnus_degree())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(text: &str) -> Report {
        run_checks(&Instance::parse(text).unwrap())
    }

    const Z3_REGULAR: &str = r#"
name = "z3"
field = "F3"
[group]
kind = "permutation"
generators = ["a"]
permutations = ["(1 2 3)"]
[representation]
kind = "regular"
[limits]
q_max = 3
p_max = 2
"#;

    #[test]
    fn z3_regular_all_verified() {
        let r = report(Z3_REGULAR);
        for c in &r.checks {
            assert!(
                matches!(c.status, Status::Verified | Status::Skipped),
                "{} {:?}: {}",
                c.id,
                c.status,
                c.details
            );
        }
        assert_eq!(r.tables.filtration_dims, vec![1, 2, 3, 3]);
        assert_eq!(r.tables.graded_algebra.as_ref().unwrap().dims[..4], [1, 1, 1, 0]);
    }

    #[test]
    fn free_group_observation() {
        let r = report(
            r#"
name = "free2"
field = "Q"
[group]
kind = "presentation"
generators = ["a", "b"]
[limits]
q_max = 3
"#,
        );
        assert!(!r.has_violation());
        let eq = r.checks.iter().find(|c| c.id == "graded.equality").unwrap();
        assert_eq!(eq.status, Status::Observation);
        assert_eq!(r.tables.graded_algebra.as_ref().unwrap().dims, vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn json_is_deterministic() {
        assert_eq!(report(Z3_REGULAR).to_json(), report(Z3_REGULAR).to_json());
    }
}

//! Acceptance criteria. Each criterion prints one PASS/FAIL line with its
//! runtime and budget; the test fails if any criterion fails.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hoinv::groupalg::{ext, ext_dims, ext_induced, free_resolution, induced_map, long_exact_sequence, parse_cycles};
use hoinv::invariants::{first_cohomology, invariants_direct, lambda_power, order_lowering};
use hoinv::magnus::{graded_dims, monomial_count};
use hoinv::words::Letter;
use hoinv::{
    fox_derivative, invariants_filtration, run_checks, AModule, FieldSpec, FiniteGroup, GroupAlgebra, GroupPresentation,
    Instance, Matrix, Representation, Word,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u128 = 1 << 24;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn perm_group(gens: &[&str], cycles: &[&str], degree: usize) -> Arc<FiniteGroup> {
    let perms: Vec<_> = cycles.iter().map(|c| parse_cycles(c, degree).unwrap()).collect();
    Arc::new(FiniteGroup::enumerate(&names(gens), &perms, 512).unwrap())
}

fn cyclic(n: usize) -> Arc<FiniteGroup> {
    let cycle = format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
    perm_group(&["a"], &[cycle.as_str()], n)
}

fn klein() -> Arc<FiniteGroup> {
    perm_group(&["a", "b"], &["(1 2)", "(3 4)"], 4)
}

fn s3() -> Arc<FiniteGroup> {
    perm_group(&["a", "b"], &["(1 2)", "(1 2 3)"], 3)
}

/// The finite-group fixtures: (label, algebra).
fn finite_corpus() -> Vec<(&'static str, GroupAlgebra)> {
    vec![
        ("Z3/F3", GroupAlgebra::new(cyclic(3), FieldSpec::Prime(3))),
        ("Z4/F2", GroupAlgebra::new(cyclic(4), FieldSpec::Prime(2))),
        ("Z2xZ2/F2", GroupAlgebra::new(klein(), FieldSpec::Prime(2))),
        ("S3/F2", GroupAlgebra::new(s3(), FieldSpec::Prime(2))),
        ("S3/F3", GroupAlgebra::new(s3(), FieldSpec::Prime(3))),
        ("S3/Q", GroupAlgebra::new(s3(), FieldSpec::Rationals)),
    ]
}

fn quotient_module(alg: &GroupAlgebra, k: usize) -> AModule {
    let chain = alg.aug_powers(k);
    AModule::regular(alg.clone()).subquotient(&chain[0], &chain[k]).unwrap().0
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for (label, alg) in finite_corpus() {
        for v in [AModule::regular(alg.clone()), AModule::trivial(alg.clone())] {
            let rep = Representation::from_module(v);
            let f = invariants_filtration(&rep, 4);
            for q in 0..=4 {
                let direct = invariants_direct(&rep, q).map_err(|e| e.to_string())?;
                ensure(&direct == f.term(q), || format!("{label} dim V {} q {q}: direct != recursive", rep.dim()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (fixture, module, q) triples equal"))
}

/// Dimension of the degree-k part of a commutative polynomial ring in n
/// variables, by counting multisets.
fn commutative_count(n: usize, k: usize) -> usize {
    (1..=k).fold(1usize, |acc, i| acc * (n + i - 1) / i)
}

fn criterion_2() -> Outcome {
    let q = FieldSpec::Rationals;
    let free = graded_dims(&GroupPresentation::free(&["a", "b"]), q, 8, CAP).map_err(|e| e.to_string())?;
    for k in 0..=8 {
        let words = (monomial_count(2, k) - if k == 0 { 0 } else { monomial_count(2, k - 1) }) as usize;
        ensure(free.as_slice()[k] == words, || format!("free F2 N({k}) = {}", free.as_slice()[k]))?;
        ensure(words == 1 << k, || "monomial count".into())?;
    }
    let comm = GroupPresentation::parse(&["a", "b"], &["[a,b]"]).unwrap();
    let c = graded_dims(&comm, q, 8, CAP).map_err(|e| e.to_string())?;
    for k in 0..=8 {
        ensure(c.as_slice()[k] == commutative_count(2, k) && c.as_slice()[k] == k + 1, || {
            format!("<a,b|[a,b]> N({k}) = {}", c.as_slice()[k])
        })?;
    }
    let z = graded_dims(&GroupPresentation::free(&["a"]), q, 8, CAP).map_err(|e| e.to_string())?;
    ensure(z.as_slice().iter().all(|&d| d == 1), || format!("<a>: {z}"))?;
    let surface = GroupPresentation::parse(&["a1", "b1", "a2", "b2"], &["[a1,b1][a2,b2]"]).unwrap();
    let s = graded_dims(&surface, q, 2, CAP).map_err(|e| e.to_string())?;
    // degree 2: 16 monomials, one quadratic relation
    ensure(s.as_slice()[1] == 4 && s.as_slice()[2] == 16 - 1, || format!("surface: {s}"))?;
    Ok(format!("free {free}; comm {c}; <a> {z}; surface {s}"))
}

fn criterion_3() -> Outcome {
    let f2 = FieldSpec::Prime(2);
    let pres = GroupPresentation::parse(&["a"], &["a^4"]).unwrap();
    let magnus = graded_dims(&pres, f2, 5, CAP).map_err(|e| e.to_string())?;
    let direct = GroupAlgebra::new(cyclic(4), f2).graded_dims(5);
    ensure(magnus.as_slice() == direct.as_slice(), || format!("Z4: magnus {magnus} vs aug_power {direct}"))?;
    ensure(magnus.as_slice() == [1, 1, 1, 1, 0, 0], || format!("Z4: {magnus}"))?;
    let f3 = FieldSpec::Prime(3);
    let s3_pres = GroupPresentation::parse(&["a", "b"], &["a^2", "b^3", "(a b)^2"]).unwrap();
    let m = graded_dims(&s3_pres, f3, 5, CAP).map_err(|e| e.to_string())?;
    let d = GroupAlgebra::new(s3(), f3).graded_dims(5);
    ensure(m.as_slice() == d.as_slice(), || format!("S3: magnus {m} vs aug_power {d}"))?;
    ensure(m.as_slice()[1..].iter().all(|&x| x == 0), || format!("S3/F3: {m}"))?;
    Ok(format!("Z4/F2 {magnus}; S3/F3 {m}"))
}

/// Oracle for `Ext^*(k[t]/t^m, k)` over `A = k[t]/t^p` built by hand: the
/// periodic resolution `… → A --t^(p−m)--> A --t^m--> A → k[t]/t^m`.
fn periodic_oracle(p: u32, m: usize, p_max: usize) -> Result<Vec<usize>, String> {
    let field = FieldSpec::Prime(p);
    let n = p as usize;
    if m == n {
        let mut dims = vec![0; p_max + 1];
        dims[0] = 1;
        return Ok(dims);
    }
    // multiplication by t^j on the basis 1, t, …, t^(p−1)
    let t_pow = |j: usize| {
        let mut mat = Matrix::zeros(field, n, n);
        for i in 0..n {
            if i + j < n {
                mat[(i + j, i)] = field.one();
            }
        }
        mat
    };
    let d_odd = t_pow(m);
    let d_even = t_pow(n - m);
    ensure(d_odd.mul(&d_even).is_zero() && d_even.mul(&d_odd).is_zero(), || "d∘d != 0".into())?;
    ensure(d_odd.rank() + d_even.rank() == n, || "not exact".into())?;
    // Hom_A(A, k) = k; the induced map of multiplication by t^j is ε(t^j)
    let eps = |j: usize| if j == 0 { 1 } else { 0 };
    let mut dims = Vec::with_capacity(p_max + 1);
    for deg in 0..=p_max {
        let out = if deg % 2 == 0 { eps(m) } else { eps(n - m) };
        let inc = if deg == 0 { 0 } else if deg % 2 == 1 { eps(m) } else { eps(n - m) };
        dims.push(1 - out - inc);
    }
    Ok(dims)
}

fn criterion_4() -> Outcome {
    let mut rows = Vec::new();
    for p in [3u32, 5] {
        let alg = GroupAlgebra::new(cyclic(p as usize), FieldSpec::Prime(p));
        let k = AModule::trivial(alg.clone());
        for q in 0..p as usize {
            let m = quotient_module(&alg, q + 1);
            let dims = ext_dims(&m, &k, 3).map_err(|e| e.to_string())?;
            let oracle = periodic_oracle(p, q + 1, 3)?;
            ensure(dims == oracle, || format!("Z{p} q={q}: {dims:?} vs oracle {oracle:?}"))?;
            let expected = if q + 1 < p as usize { vec![1, 1, 1, 1] } else { vec![1, 0, 0, 0] };
            ensure(dims == expected, || format!("Z{p} q={q}: {dims:?}"))?;
            rows.push(format!("Z{p} q={q} {dims:?}"));
        }
    }
    Ok(rows.join("; "))
}

fn criterion_5() -> Outcome {
    let mut nodes = 0;
    for (label, alg) in [
        ("Z3/F3", GroupAlgebra::new(cyclic(3), FieldSpec::Prime(3))),
        ("Z2xZ2/F2", GroupAlgebra::new(klein(), FieldSpec::Prime(2))),
    ] {
        for (vname, v) in [("trivial", AModule::trivial(alg.clone())), ("regular", AModule::regular(alg.clone()))] {
            for q in 1..=2 {
                let les = long_exact_sequence(&alg, q, &v, 2).map_err(|e| e.to_string())?;
                ensure(les.is_exact(), || {
                    let bad: Vec<String> = les.violations().iter().map(|n| n.label()).collect();
                    format!("{label} {vname} q={q}: not exact at {}", bad.join(", "))
                })?;
                ensure(les.graded_term_matches(), || format!("{label} {vname} q={q}: graded term dims"))?;
                nodes += les.nodes.len();
            }
        }
    }
    let alg = GroupAlgebra::new(cyclic(3), FieldSpec::Prime(3));
    let les = long_exact_sequence(&alg, 1, &AModule::trivial(alg.clone()), 2).map_err(|e| e.to_string())?;
    ensure(les.node_dims() == vec![1; 9], || format!("Z3 trivial q=1 dims {:?}", les.node_dims()))?;
    Ok(format!("{nodes} nodes exact, 0 violations"))
}

fn criterion_6() -> Outcome {
    let mut corpus = finite_corpus();
    corpus.push(("Z5/F5", GroupAlgebra::new(cyclic(5), FieldSpec::Prime(5))));
    let mut checked = 0;
    for (label, alg) in corpus {
        let a = AModule::regular(alg.clone());
        for q in 0..=3 {
            let m = quotient_module(&alg, q + 1);
            let dims = ext_dims(&m, &a, 3).map_err(|e| e.to_string())?;
            ensure(dims[1..].iter().all(|&d| d == 0), || format!("{label} q={q}: {dims:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("H_q^p(G, A) = 0 for 1 <= p <= 3 on {checked} (group, q) pairs"))
}

fn criterion_7() -> Outcome {
    let mut rows = Vec::new();
    for p in [3usize, 5] {
        let alg = GroupAlgebra::new(cyclic(p), FieldSpec::Prime(p as u32));
        let a = AModule::regular(alg.clone());
        let rep = Representation::from_module(a.clone());
        let fox = first_cohomology(&rep).dim();
        let ext1 = ext_dims(&quotient_module(&alg, 1), &a, 1).map_err(|e| e.to_string())?[1];
        ensure(fox == 0 && ext1 == 0, || format!("Z{p}: H^1(G, A) = {fox} / {ext1}"))?;
        let q_max = p + 1;
        let f = invariants_filtration(&rep, q_max);
        let graded = f.graded_dims();
        let n = alg.graded_dims(q_max);
        let fixed = f.term(0).dim();
        for q in 1..=q_max {
            let expected = if q < p { 1 } else { 0 };
            ensure(graded[q] == n.as_slice()[q] * fixed && graded[q] == expected, || {
                format!("Z{p} q={q}: graded {} N {} fixed {fixed}", graded[q], n.as_slice()[q])
            })?;
        }
        rows.push(format!("Z{p} graded {:?}", &graded[1..]));
    }
    Ok(rows.join("; "))
}

fn criterion_8() -> Outcome {
    let mut pairs = 0;
    for (label, alg) in finite_corpus() {
        let k = AModule::trivial(alg.clone());
        let n = alg.graded_dims(3);
        for q in 1..=3 {
            let ext1 = ext_dims(&quotient_module(&alg, q), &k, 1).map_err(|e| e.to_string())?[1];
            ensure(ext1 == n.as_slice()[q], || format!("{label} q={q}: N {} vs Ext^1 {ext1}", n.as_slice()[q]))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (fixture, q) pairs agree"))
}

fn criterion_9() -> Outcome {
    let mut shapes = Vec::new();
    for (label, alg) in [
        ("Z3/F3", GroupAlgebra::new(cyclic(3), FieldSpec::Prime(3))),
        ("Z2xZ2/F2", GroupAlgebra::new(klein(), FieldSpec::Prime(2))),
    ] {
        let k = AModule::trivial(alg.clone());
        let chain = alg.aug_powers(3);
        let regular = AModule::regular(alg.clone());
        for q in 1..=2 {
            let (big, qb) = regular.subquotient(&chain[0], &chain[q + 1]).unwrap();
            let (small, qs) = regular.subquotient(&chain[0], &chain[q]).unwrap();
            let pi = induced_map(&qb, &qs).map_err(|e| e.to_string())?;
            let (rb, rs) = (free_resolution(&big, 2), free_resolution(&small, 2));
            let m = ext_induced(&rb, &rs, &pi, &k, 1).map_err(|e| e.to_string())?;
            let source = ext(&rs, &k, 1).map_err(|e| e.to_string())?.dim();
            ensure(m.cols() == source && m.is_zero(), || format!("{label} q={q}: nonzero map"))?;
            shapes.push(format!("{label} q={q} {}x{}", m.rows(), m.cols()));
        }
    }
    Ok(format!("zero matrices: {}", shapes.join(", ")))
}

fn jordan(k: usize) -> Representation {
    let field = FieldSpec::Rationals;
    let mut m = Matrix::identity(field, k);
    for i in 0..k - 1 {
        m[(i, i + 1)] = field.one();
    }
    Representation::from_presentation(GroupPresentation::free(&["a"]), field, k, vec![m]).unwrap()
}

fn lambda_ok(label: &str, rep: &Representation, q_max: usize) -> Result<(), String> {
    let f = invariants_filtration(rep, q_max);
    for q in 1..=q_max {
        let l = order_lowering(rep, &f, q).map_err(|e| e.to_string())?;
        ensure(l.injective, || format!("{label}: Λ not injective at q={q}"))?;
        ensure(l.relator_consistent, || format!("{label}: relator condition fails at q={q}"))?;
        let lp = lambda_power(rep, &f, q).map_err(|e| e.to_string())?;
        ensure(lp.injective, || format!("{label}: Λ^{q} not injective"))?;
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let mut count = 0;
    for (label, alg) in finite_corpus() {
        for v in [AModule::regular(alg.clone()), AModule::trivial(alg.clone())] {
            lambda_ok(label, &Representation::from_module(v), 4)?;
            count += 1;
        }
    }
    for k in 1..=6 {
        let rep = jordan(k);
        let f = invariants_filtration(&rep, k + 1);
        let expected: Vec<usize> = (0..=k + 1).map(|q| (q + 1).min(k)).collect();
        ensure(f.dims() == expected, || format!("Jordan {k}: dims {:?}", f.dims()))?;
        lambda_ok(&format!("Jordan {k}"), &rep, k + 1)?;
        count += 1;
    }
    for path in fixture_paths() {
        let inst = Instance::load(&path).map_err(|e| e.to_string())?;
        lambda_ok(inst.name(), &inst.representation, 3)?;
        count += 1;
    }
    Ok(format!("{count} representations"))
}

fn random_word(rng: &mut ChaCha8Rng, generators: usize) -> Word {
    let len = rng.gen_range(0..=24);
    Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(0..generators), rng.gen_bool(0.5))))
}

fn criterion_11() -> Outcome {
    let mut reps: Vec<(String, Representation)> = Vec::new();
    for (label, alg) in finite_corpus() {
        reps.push((format!("{label} regular"), Representation::from_module(AModule::regular(alg))));
    }
    for path in fixture_paths() {
        let inst = Instance::load(&path).map_err(|e| e.to_string())?;
        reps.push((inst.name().to_string(), inst.representation));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for (label, rep) in &reps {
        let field = rep.field();
        let d = rep.dim();
        let id = Matrix::identity(field, d);
        for _ in 0..200 {
            let w = random_word(&mut rng, rep.num_generators());
            let mut rhs = Matrix::zeros(field, d, d);
            for i in 0..rep.num_generators() {
                let fox = fox_derivative(&w, i).evaluate(field, d, |u| rep.eval(u));
                rhs = rhs.add(&fox.mul(&rep.generator(i).sub(&id)));
            }
            ensure(rep.eval(&w).sub(&id) == rhs, || format!("{label}: identity fails"))?;
        }
    }
    Ok(format!("200 words on each of {} representations", reps.len()))
}

fn fixture_paths() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .expect("fixtures directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths
}

fn criterion_12() -> Outcome {
    let paths = fixture_paths();
    for path in &paths {
        let a = run_checks(&Instance::load(path).map_err(|e| e.to_string())?).to_json();
        let b = run_checks(&Instance::load(path).map_err(|e| e.to_string())?).to_json();
        ensure(a == b, || format!("{}: reports differ", path.display()))?;
    }
    Ok(format!("{} fixtures byte-identical", paths.len()))
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion { id: 1, name: "filtration oracle equality", budget: Duration::from_secs(5), run: criterion_1 },
        Criterion { id: 2, name: "graded dimensions", budget: Duration::from_secs(60), run: criterion_2 },
        Criterion { id: 3, name: "cross-oracle N(q)", budget: Duration::from_secs(5), run: criterion_3 },
        Criterion { id: 4, name: "Ext table for Z/p", budget: Duration::from_secs(30), run: criterion_4 },
        Criterion { id: 5, name: "long exact sequence exactness", budget: Duration::from_secs(60), run: criterion_5 },
        Criterion { id: 6, name: "free module has no higher cohomology", budget: Duration::from_secs(30), run: criterion_6 },
        Criterion { id: 7, name: "graded equality when H^1 vanishes", budget: Duration::from_secs(30), run: criterion_7 },
        Criterion { id: 8, name: "duality N(q) = dim Ext^1", budget: Duration::from_secs(30), run: criterion_8 },
        Criterion { id: 9, name: "zero map on H^1", budget: Duration::from_secs(30), run: criterion_9 },
        Criterion { id: 10, name: "order-lowering properties", budget: Duration::from_secs(30), run: criterion_10 },
        Criterion { id: 11, name: "Fox identity", budget: Duration::from_secs(60), run: criterion_11 },
        Criterion { id: 12, name: "report determinism", budget: Duration::from_secs(60), run: criterion_12 },
    ];
    let mut failures = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= c.budget;
        let (tag, detail) = match (&outcome, in_budget) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over budget: {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        println!(
            "{tag} criterion {:>2} {:<40} {:>7.2}s / {:>3}s  {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
        if tag == "FAIL" {
            failures.push(c.id);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}

use std::sync::Arc;

use crate::error::{Error, LinalgError, RepError};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{close_under, quotient_map, zero_vector, Echelon, Matrix, Quotient, Subspace, Vector};
use crate::magnus::GradedDims;

use super::group::FiniteGroup;

/// The group algebra `A = R[Γ]` of a finite group, with basis the group elements.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    group: Arc<FiniteGroup>,
    field: FieldSpec,
}

impl GroupAlgebra {
    pub fn new(group: Arc<FiniteGroup>, field: FieldSpec) -> Self {
        GroupAlgebra { group, field }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn element(&self, g: usize) -> Vector {
        let mut v = zero_vector(self.field, self.dim());
        v[g] = self.field.one();
        v
    }

    /// `g − 1`.
    pub fn augmented(&self, g: usize) -> Vector {
        let mut v = self.element(g);
        v[0] = &v[0] - &self.field.one();
        v
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field, self.dim());
        for (g, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (h, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out[self.group.mul(g, h)].add_mul(a, b);
            }
        }
        out
    }

    /// `A` is local exactly when `Γ` is a `p`-group in characteristic `p`; then
    /// the augmentation ideal is the radical.
    pub fn is_local(&self) -> bool {
        let p = self.field.characteristic();
        p > 0 && self.group.is_p_group(p)
    }

    /// The augmentation ideal `I = span{g − 1}`.
    pub fn augmentation_ideal(&self) -> Subspace {
        Subspace::from_vectors(self.field, self.dim(), (1..self.dim()).map(|g| self.augmented(g)).collect::<Vec<_>>())
    }

    /// `I^0, I^1, …, I^{q_max}`.
    pub fn aug_powers(&self, q_max: usize) -> Vec<Subspace> {
        let regular = AModule::regular(self.clone());
        let mut chain = vec![Subspace::full(self.field, self.dim())];
        if q_max == 0 {
            return chain;
        }
        chain.push(self.augmentation_ideal());
        for _ in 2..=q_max {
            let prev = chain.last().expect("nonempty chain");
            let seed: Vec<Vector> = self
                .group
                .generators()
                .iter()
                .flat_map(|&s| {
                    let d = self.augmented(s);
                    prev.basis().iter().map(move |x| (d.clone(), x.clone()))
                })
                .map(|(d, x)| self.mul(&d, &x))
                .collect();
            chain.push(regular.submodule_generated(&seed));
        }
        chain
    }

    /// `N(k) = dim I^k / I^{k+1}` for `k ≤ q_max`.
    pub fn graded_dims(&self, q_max: usize) -> GradedDims {
        let chain = self.aug_powers(q_max + 1);
        GradedDims((0..=q_max).map(|k| chain[k].dim() - chain[k + 1].dim()).collect())
    }
}

/// `I^q` as a subspace of `A`.
pub fn aug_power(alg: &GroupAlgebra, q: usize) -> Subspace {
    alg.aug_powers(q).pop().expect("chain has q + 1 terms")
}

#[derive(Clone, Debug)]
enum Action {
    /// One matrix per group element.
    Matrices(Vec<Matrix>),
    /// `A^rank` with coordinates `(j, h) ↦ j·|Γ| + h`.
    Free { rank: usize },
}

/// A finite-dimensional module over a group algebra.
#[derive(Clone, Debug)]
pub struct AModule {
    alg: GroupAlgebra,
    dim: usize,
    action: Action,
}

impl AModule {
    pub fn regular(alg: GroupAlgebra) -> Self {
        Self::free(alg, 1)
    }

    pub fn free(alg: GroupAlgebra, rank: usize) -> Self {
        let dim = rank * alg.dim();
        AModule { alg, dim, action: Action::Free { rank } }
    }

    /// The field with every element acting as 1.
    pub fn trivial(alg: GroupAlgebra) -> Self {
        let id = Matrix::identity(alg.field(), 1);
        let mats = vec![id; alg.dim()];
        AModule { alg, dim: 1, action: Action::Matrices(mats) }
    }

    /// Extends generator matrices along the BFS words and checks the group law
    /// `ρ(h·s) = ρ(h)·ρ(s)` for every element `h` and generator `s`.
    pub fn from_generator_matrices(alg: GroupAlgebra, dim: usize, gens: &[Matrix]) -> Result<Self, RepError> {
        let group = alg.group().clone();
        let names = group.generator_names();
        if gens.len() != group.generators().len() {
            return Err(RepError::GeneratorCount { expected: group.generators().len(), found: gens.len() });
        }
        for (m, name) in gens.iter().zip(names) {
            if m.rows() != dim || m.cols() != dim {
                return Err(RepError::BadShape(name.clone()));
            }
            if m.field() != alg.field() {
                return Err(RepError::WrongField);
            }
            if m.inverse().is_none() {
                return Err(RepError::NotInvertible(name.clone()));
            }
        }
        let field = alg.field();
        let mut mats: Vec<Matrix> = Vec::with_capacity(group.order());
        for g in 0..group.order() {
            let m = group.word(g).letters().iter().fold(Matrix::identity(field, dim), |acc, l| acc.mul(&gens[l.generator]));
            mats.push(m);
        }
        for h in 0..group.order() {
            for (s, &g) in group.generators().iter().enumerate() {
                if mats[group.mul(h, g)] != mats[h].mul(&gens[s]) {
                    return Err(RepError::NotHomomorphism);
                }
            }
        }
        Ok(AModule { alg, dim, action: Action::Matrices(mats) })
    }

    pub fn algebra(&self) -> &GroupAlgebra {
        &self.alg
    }

    pub fn field(&self) -> FieldSpec {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn free_rank(&self) -> Option<usize> {
        match self.action {
            Action::Free { rank } => Some(rank),
            Action::Matrices(_) => None,
        }
    }

    pub fn act(&self, g: usize, v: &[Scalar]) -> Vector {
        match &self.action {
            Action::Matrices(m) => m[g].mul_vec(v),
            Action::Free { rank } => {
                let n = self.alg.dim();
                let group = self.alg.group();
                let mut out = zero_vector(self.field(), self.dim);
                for j in 0..*rank {
                    for h in 0..n {
                        out[j * n + group.mul(g, h)] = v[j * n + h].clone();
                    }
                }
                out
            }
        }
    }

    pub fn element_matrix(&self, g: usize) -> Matrix {
        match &self.action {
            Action::Matrices(m) => m[g].clone(),
            Action::Free { .. } => {
                let cols: Vec<Vector> = (0..self.dim)
                    .map(|i| self.act(g, &crate::linalg::unit_vector(self.field(), self.dim, i)))
                    .collect();
                Matrix::from_columns(self.field(), self.dim, &cols)
            }
        }
    }

    /// `a·v` for a group-algebra element `a`.
    pub fn act_algebra(&self, a: &[Scalar], v: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field(), self.dim);
        for (g, c) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (o, x) in out.iter_mut().zip(self.act(g, v)) {
                o.add_mul(c, &x);
            }
        }
        out
    }

    /// Matrix of `v ↦ a·v`.
    pub fn algebra_matrix(&self, a: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.dim, self.dim);
        for (g, c) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            m.add_scaled(c, &self.element_matrix(g));
        }
        m
    }

    fn generator_actions(&self) -> Vec<impl Fn(&[Scalar]) -> Vector + '_> {
        self.alg.group().generators().iter().map(move |&s| move |v: &[Scalar]| self.act(s, v)).collect()
    }

    /// The A-submodule generated by `seed`.
    pub fn submodule_generated(&self, seed: &[Vector]) -> Subspace {
        self.extend_submodule(Echelon::new(self.field(), self.dim), seed).into_subspace()
    }

    fn extend_submodule(&self, start: Echelon, seed: &[Vector]) -> Echelon {
        close_under(start, seed.to_vec(), &self.generator_actions())
    }

    pub fn is_submodule(&self, sub: &Subspace) -> bool {
        self.alg.group().generators().iter().all(|&s| sub.basis().iter().all(|b| sub.contains(&self.act(s, b))))
    }

    /// `I·K` for a submodule `K`.
    pub fn augmentation_multiple(&self, sub: &Subspace) -> Subspace {
        let seed: Vec<Vector> = self
            .alg
            .group()
            .generators()
            .iter()
            .flat_map(|&s| {
                sub.basis().iter().map(move |b| {
                    let gb = self.act(s, b);
                    gb.iter().zip(b).map(|(x, y)| x - y).collect()
                })
            })
            .collect();
        self.submodule_generated(&seed)
    }

    /// Fixed vectors `V^Γ`.
    pub fn fixed_points(&self) -> Subspace {
        let field = self.field();
        let id = Matrix::identity(field, self.dim);
        let blocks: Vec<Matrix> =
            self.alg.group().generators().iter().map(|&s| self.element_matrix(s).sub(&id)).collect();
        Matrix::vstack(field, self.dim, &blocks).kernel()
    }

    /// The module `upper / lower` in quotient coordinates, with the coset data
    /// used to build maps between subquotients of this module.
    pub fn subquotient(&self, upper: &Subspace, lower: &Subspace) -> Result<(AModule, Quotient), Error> {
        if !self.is_submodule(upper) || !self.is_submodule(lower) {
            return Err(Error::Internal("subquotient of non-submodules".into()));
        }
        let quot = quotient_map(upper, lower)?;
        let m = quot.dim();
        let field = self.field();
        let mats = (0..self.alg.dim())
            .map(|g| {
                let cols: Vec<Vector> = quot.reps().iter().map(|r| quot.project(&self.act(g, r))).collect();
                Matrix::from_columns(field, m, &cols)
            })
            .collect();
        Ok((AModule { alg: self.alg.clone(), dim: m, action: Action::Matrices(mats) }, quot))
    }

    /// A generating set of the submodule `sub`: minimal via `sub / I·sub` when
    /// the algebra is local, otherwise chosen greedily, largest cyclic
    /// submodules first.
    pub fn generating_set(&self, sub: &Subspace) -> Vec<Vector> {
        if sub.is_zero() {
            return Vec::new();
        }
        if self.alg.is_local() {
            let rad = self.augmentation_multiple(sub);
            return quotient_map(sub, &rad).expect("I·K ⊆ K").reps().to_vec();
        }
        let mut candidates: Vec<(usize, &Vector)> =
            sub.basis().iter().map(|b| (self.submodule_generated(std::slice::from_ref(b)).dim(), b)).collect();
        candidates.sort_by_key(|c| std::cmp::Reverse(c.0));
        let mut span = Echelon::new(self.field(), self.dim);
        let mut chosen = Vec::new();
        for (_, b) in candidates {
            if span.dim() == sub.dim() {
                break;
            }
            if span.contains(b) {
                continue;
            }
            chosen.push(b.clone());
            span = self.extend_submodule(span, std::slice::from_ref(b));
        }
        chosen
    }
}

/// Matrix of the map between two subquotients of a common module induced by
/// the identity, `(U / W) → (U' / W')` with `U ⊆ U'` and `W ⊆ W'`.
pub fn induced_map(source: &Quotient, target: &Quotient) -> Result<Matrix, LinalgError> {
    let field = target.projection().field();
    let cols: Vec<Vector> = source.reps().iter().map(|r| target.project(r)).collect();
    if source.reps().iter().any(|r| r.len() != target.projection().cols()) {
        return Err(LinalgError::DimensionMismatch { expected: target.projection().cols(), found: 0 });
    }
    Ok(Matrix::from_columns(field, target.dim(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupalg::group::{parse_cycles, FiniteGroup};

    fn cyclic(n: usize) -> Arc<FiniteGroup> {
        let cycle = format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
        Arc::new(FiniteGroup::enumerate(&["a".into()], &[parse_cycles(&cycle, n).unwrap()], 64).unwrap())
    }

    fn klein() -> Arc<FiniteGroup> {
        Arc::new(
            FiniteGroup::enumerate(
                &["a".into(), "b".into()],
                &[parse_cycles("(1 2)", 4).unwrap(), parse_cycles("(3 4)", 4).unwrap()],
                64,
            )
            .unwrap(),
        )
    }

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(
            FiniteGroup::enumerate(
                &["a".into(), "b".into()],
                &[parse_cycles("(1 2)", 3).unwrap(), parse_cycles("(1 2 3)", 3).unwrap()],
                64,
            )
            .unwrap(),
        )
    }

    fn dims(chain: &[Subspace]) -> Vec<usize> {
        chain.iter().map(Subspace::dim).collect()
    }

    #[test]
    fn aug_power_examples() {
        let z3 = GroupAlgebra::new(cyclic(3), FieldSpec::Prime(3));
        assert_eq!(dims(&z3.aug_powers(3)), vec![3, 2, 1, 0]);
        let v4 = GroupAlgebra::new(klein(), FieldSpec::Prime(2));
        assert_eq!(dims(&v4.aug_powers(3)), vec![4, 3, 1, 0]);
        assert_eq!(v4.graded_dims(3).as_slice(), &[1, 2, 1, 0]);
        let s3q = GroupAlgebra::new(s3(), FieldSpec::Rationals);
        let chain = s3q.aug_powers(4);
        assert_eq!(chain[2], chain[1]);
        assert_eq!(s3q.graded_dims(3).as_slice(), &[1, 0, 0, 0]);
    }

    #[test]
    fn locality() {
        assert!(GroupAlgebra::new(cyclic(4), FieldSpec::Prime(2)).is_local());
        assert!(!GroupAlgebra::new(s3(), FieldSpec::Prime(3)).is_local());
        assert!(!GroupAlgebra::new(cyclic(3), FieldSpec::Rationals).is_local());
    }

    #[test]
    fn generator_matrices_must_respect_the_group() {
        let f3 = FieldSpec::Prime(3);
        let alg = GroupAlgebra::new(cyclic(3), f3);
        let shift = Matrix::from_i64(f3, &[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(AModule::from_generator_matrices(alg.clone(), 3, &[shift]).is_ok());
        let swap = Matrix::from_i64(f3, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(
            AModule::from_generator_matrices(alg.clone(), 2, &[swap]).unwrap_err(),
            RepError::NotHomomorphism
        );
        let singular = Matrix::from_i64(f3, &[vec![1, 1], vec![0, 0]]);
        assert!(matches!(
            AModule::from_generator_matrices(alg, 2, &[singular]),
            Err(RepError::NotInvertible(_))
        ));
    }

    #[test]
    fn regular_subquotients() {
        let alg = GroupAlgebra::new(cyclic(3), FieldSpec::Prime(3));
        let chain = alg.aug_powers(2);
        let regular = AModule::regular(alg.clone());
        let (m, _) = regular.subquotient(&chain[0], &chain[2]).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.fixed_points().dim(), 1);
        assert_eq!(m.generating_set(&Subspace::full(m.field(), 2)).len(), 1);
        let (top, _) = regular.subquotient(&chain[1], &chain[2]).unwrap();
        assert_eq!(top.dim(), 1);
        assert!(top.element_matrix(1).is_identity());
    }

    #[test]
    fn greedy_generators_generate() {
        let alg = GroupAlgebra::new(s3(), FieldSpec::Prime(3));
        let regular = AModule::regular(alg.clone());
        let full = Subspace::full(alg.field(), 6);
        let gens = regular.generating_set(&full);
        assert_eq!(regular.submodule_generated(&gens), full);
        assert_eq!(gens.len(), 1);
        let ideal = alg.augmentation_ideal();
        let gens = regular.generating_set(&ideal);
        assert_eq!(regular.submodule_generated(&gens), ideal);
    }
}

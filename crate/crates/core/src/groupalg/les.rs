//! The long exact `Ext` sequence of `0 → I^q/I^{q+1} → A/I^{q+1} → A/I^q → 0`.
//!
//! The middle term is resolved by the horseshoe construction on resolutions
//! of the outer terms, so that `0 → Hom(F'', V) → Hom(F, V) → Hom(F', V) → 0`
//! is split in every degree and the connecting map is explicit.

use crate::error::Error;
use crate::linalg::{Matrix, Vector};

use super::module::{induced_map, AModule, GroupAlgebra};
use super::resolution::{ext, free_map_matrix, free_resolution, hom_pullback, ExtGroup, FreeResolution};

/// Resolution of the middle term of `0 → K → M → M'' → 0` assembled from
/// resolutions of `K` and `M''`. The generators of `F_k` are those of `F'_k`
/// followed by those of `F''_k`.
pub fn horseshoe(
    left: &FreeResolution,
    right: &FreeResolution,
    middle: &AModule,
    inclusion: &Matrix,
    projection: &Matrix,
) -> Result<FreeResolution, Error> {
    let length = left.length().min(right.length());
    let alg = middle.algebra();
    let n = alg.dim();
    let fail = |k: usize| Error::Internal(format!("horseshoe construction failed in degree {k}"));

    let mut augmentation: Vec<Vector> = left.augmentation().iter().map(|x| inclusion.mul_vec(x)).collect();
    for y in right.augmentation() {
        augmentation.push(projection.solve(y).ok_or_else(|| fail(0))?);
    }

    let mut boundaries: Vec<Vec<Vector>> = Vec::with_capacity(length);
    let mut prev = free_map_matrix(middle, &augmentation);
    for k in 1..=length {
        let m_left = left.ranks()[k - 1];
        let m_right = right.ranks()[k - 1];
        // restriction of the previous map to the F' summand
        let prev_left = prev_columns(&prev, 0, m_left * n);
        let mut images = Vec::with_capacity(left.ranks()[k] + right.ranks()[k]);
        for x in left.boundary(k) {
            let mut v = x.clone();
            v.extend(zero_tail(alg, m_right));
            images.push(v);
        }
        for y in right.boundary(k) {
            let mut v = zero_tail(alg, m_left);
            v.extend(y.iter().cloned());
            let target = prev.mul_vec(&v);
            let neg: Vector = target.iter().map(|s| -s.clone()).collect();
            let lambda = prev_left.solve(&neg).ok_or_else(|| fail(k))?;
            v[..m_left * n].clone_from_slice(&lambda);
            images.push(v);
        }
        let next_module = AModule::free(alg.clone(), m_left + m_right);
        prev = free_map_matrix(&next_module, &images);
        boundaries.push(images);
    }
    FreeResolution::from_parts(middle.clone(), augmentation, boundaries)
}

fn prev_columns(m: &Matrix, start: usize, end: usize) -> Matrix {
    let cols: Vec<Vector> = (start..end).map(|j| m.column(j)).collect();
    Matrix::from_columns(m.field(), m.rows(), &cols)
}

fn zero_tail(alg: &GroupAlgebra, rank: usize) -> Vector {
    crate::linalg::zero_vector(alg.field(), rank * alg.dim())
}

/// Which of the three modules a node belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Term {
    /// `A/I^q`
    Quotient,
    /// `A/I^{q+1}`
    Middle,
    /// `I^q/I^{q+1}`
    Graded,
}

impl Term {
    fn module_label(self) -> &'static str {
        match self {
            Term::Quotient => "A/I^q",
            Term::Middle => "A/I^(q+1)",
            Term::Graded => "I^q/I^(q+1)",
        }
    }
}

/// One node of the sequence, `Ext^p` of one of the three modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub term: Term,
    pub degree: usize,
    pub dim: usize,
    pub exact: bool,
}

#[derive(Clone, Debug)]
pub struct LongExactSequence {
    pub q: usize,
    pub p_max: usize,
    pub nodes: Vec<Node>,
    /// `maps[i]` goes from `nodes[i]` to `nodes[i + 1]`; the last one lands
    /// in `Ext^{p_max+1}(A/I^q, V)`, which is not itself a node.
    pub maps: Vec<Matrix>,
    /// `N(q) = dim I^q/I^{q+1}`.
    pub graded_dim: usize,
    /// `dim H^p(Γ, V)` for `p ≤ p_max`.
    pub cohomology_dims: Vec<usize>,
}

impl Node {
    pub fn label(&self) -> String {
        format!("Ext^{}({}, V)", self.degree, self.term.module_label())
    }
}

impl LongExactSequence {
    pub fn node_dims(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.dim).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }

    /// Nodes where exactness fails.
    pub fn violations(&self) -> Vec<&Node> {
        self.nodes.iter().filter(|n| !n.exact).collect()
    }

    /// `dim Ext^p(I^q/I^{q+1}, V) = N(q) · dim H^p(Γ, V)` for every computed `p`.
    pub fn graded_term_matches(&self) -> bool {
        self.nodes
            .iter()
            .filter(|n| n.term == Term::Graded)
            .all(|n| n.dim == self.graded_dim * self.cohomology_dims[n.degree])
    }
}

fn class_matrix(
    target: &ExtGroup,
    source_basis: &[Vector],
    map: impl Fn(&Vector) -> Vector,
    field: crate::field::FieldSpec,
) -> Result<Matrix, Error> {
    let mut cols = Vec::with_capacity(source_basis.len());
    for z in source_basis {
        let image = map(z);
        if !target.is_cocycle(&image) {
            return Err(Error::Internal("image of a cocycle is not a cocycle".into()));
        }
        cols.push(target.class_of(&image));
    }
    Ok(Matrix::from_columns(field, target.dim(), &cols))
}

/// Exactness of `X --f--> Y --g--> Z` at `Y`.
fn exact_at(f: &Matrix, g: &Matrix, dim_y: usize) -> bool {
    g.mul(f).is_zero() && f.rank() + g.rank() == dim_y
}

/// Builds and checks the long exact sequence for `q ≥ 1` through `Ext^{p_max}`.
pub fn long_exact_sequence(alg: &GroupAlgebra, q: usize, v: &AModule, p_max: usize) -> Result<LongExactSequence, Error> {
    if q == 0 {
        return Err(Error::Instance("the long exact sequence needs q >= 1".into()));
    }
    let field = alg.field();
    let d = v.dim();
    let chain = alg.aug_powers(q + 1);
    let regular = AModule::regular(alg.clone());
    let (graded, q_graded) = regular.subquotient(&chain[q], &chain[q + 1])?;
    let (middle, q_middle) = regular.subquotient(&chain[0], &chain[q + 1])?;
    let (right, q_right) = regular.subquotient(&chain[0], &chain[q])?;
    let inclusion = induced_map(&q_graded, &q_middle)?;
    let projection = induced_map(&q_middle, &q_right)?;

    let res_left = free_resolution(&graded, p_max + 1);
    let res_right = free_resolution(&right, p_max + 2);
    let res_middle = horseshoe(&res_left, &res_right, &middle, &inclusion, &projection)?;

    let ext_left: Vec<ExtGroup> = (0..=p_max).map(|p| ext(&res_left, v, p)).collect::<Result<_, _>>()?;
    let ext_mid: Vec<ExtGroup> = (0..=p_max).map(|p| ext(&res_middle, v, p)).collect::<Result<_, _>>()?;
    let ext_right: Vec<ExtGroup> = (0..=p_max + 1).map(|p| ext(&res_right, v, p)).collect::<Result<_, _>>()?;

    let mut maps = Vec::with_capacity(3 * (p_max + 1));
    for p in 0..=p_max {
        let ml = res_left.ranks()[p] * d;
        let mr = res_right.ranks()[p] * d;
        // Ext^p(A/I^q) → Ext^p(A/I^{q+1}): extend by zero on F'
        let alpha = class_matrix(
            &ext_mid[p],
            ext_right[p].cocycle_basis(),
            |z| {
                let mut w = crate::linalg::zero_vector(field, ml);
                w.extend(z.iter().cloned());
                w
            },
            field,
        )?;
        // Ext^p(A/I^{q+1}) → Ext^p(I^q/I^{q+1}): restrict to F'
        let beta = class_matrix(&ext_left[p], ext_mid[p].cocycle_basis(), |z| z[..ml].to_vec(), field)?;
        // connecting map: extend by zero, apply the coboundary of F, keep the F'' part
        let cob = hom_pullback(v, res_middle.ranks()[p], res_middle.boundary(p + 1));
        let ml_next = res_left.ranks()[p + 1] * d;
        let delta = class_matrix(
            &ext_right[p + 1],
            ext_left[p].cocycle_basis(),
            |z| {
                let mut w = z.clone();
                w.extend(crate::linalg::zero_vector(field, mr));
                let image = cob.mul_vec(&w);
                debug_assert!(image[..ml_next].iter().all(|s| s.is_zero()));
                image[ml_next..].to_vec()
            },
            field,
        )?;
        maps.push(alpha);
        maps.push(beta);
        maps.push(delta);
    }

    let mut nodes = Vec::with_capacity(3 * (p_max + 1));
    for p in 0..=p_max {
        let dims = [ext_right[p].dim(), ext_mid[p].dim(), ext_left[p].dim()];
        let terms = [Term::Quotient, Term::Middle, Term::Graded];
        for (i, (dim, term)) in dims.iter().zip(terms).enumerate() {
            let idx = 3 * p + i;
            let outgoing = &maps[idx];
            let exact = if idx == 0 {
                outgoing.rank() == *dim
            } else {
                exact_at(&maps[idx - 1], outgoing, *dim)
            };
            nodes.push(Node { term, degree: p, dim: *dim, exact });
        }
    }

    // H^p(Γ, V) = Ext^p(A/I, V)
    let (unit, _) = regular.subquotient(&chain[0], &chain[1])?;
    let res_unit = free_resolution(&unit, p_max + 1);
    let cohomology_dims = (0..=p_max).map(|p| ext(&res_unit, v, p).map(|e| e.dim())).collect::<Result<_, _>>()?;

    Ok(LongExactSequence {
        q,
        p_max,
        nodes,
        maps,
        graded_dim: chain[q].dim() - chain[q + 1].dim(),
        cohomology_dims,
    })
}

/// `dim H_q^0(Γ, V)` through `Ext^0(A/I^{q+1}, V)`, for cross-checking.
pub fn ext_zero_dim(alg: &GroupAlgebra, q: usize, v: &AModule) -> Result<usize, Error> {
    let chain = alg.aug_powers(q + 1);
    let (m, _) = AModule::regular(alg.clone()).subquotient(&chain[0], &chain[q + 1])?;
    let res = free_resolution(&m, 1);
    Ok(ext(&res, v, 0)?.dim())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::FieldSpec;
    use crate::groupalg::group::{parse_cycles, FiniteGroup};

    fn z3() -> GroupAlgebra {
        let g = FiniteGroup::enumerate(&["a".into()], &[parse_cycles("(1 2 3)", 3).unwrap()], 16).unwrap();
        GroupAlgebra::new(Arc::new(g), FieldSpec::Prime(3))
    }

    fn klein() -> GroupAlgebra {
        let g = FiniteGroup::enumerate(
            &["a".into(), "b".into()],
            &[parse_cycles("(1 2)", 4).unwrap(), parse_cycles("(3 4)", 4).unwrap()],
            16,
        )
        .unwrap();
        GroupAlgebra::new(Arc::new(g), FieldSpec::Prime(2))
    }

    #[test]
    fn z3_trivial_sequence() {
        let alg = z3();
        let k = AModule::trivial(alg.clone());
        let les = long_exact_sequence(&alg, 1, &k, 2).unwrap();
        assert_eq!(les.node_dims(), vec![1; 9]);
        assert!(les.is_exact());
        assert!(les.graded_term_matches());
    }

    #[test]
    fn z3_regular_sequence() {
        let alg = z3();
        let a = AModule::regular(alg.clone());
        let les = long_exact_sequence(&alg, 1, &a, 2).unwrap();
        assert_eq!(les.node_dims(), vec![1, 2, 1, 0, 0, 0, 0, 0, 0]);
        assert!(les.is_exact());
        assert!(les.graded_term_matches());
    }

    #[test]
    fn klein_sequences_are_exact() {
        let alg = klein();
        for v in [AModule::trivial(alg.clone()), AModule::regular(alg.clone())] {
            for q in 1..=2 {
                let les = long_exact_sequence(&alg, q, &v, 2).unwrap();
                assert!(les.is_exact(), "q = {q}: {:?}", les.violations());
                assert!(les.graded_term_matches());
            }
        }
    }

    #[test]
    fn horseshoe_is_a_resolution() {
        let alg = klein();
        let k = AModule::trivial(alg.clone());
        let les = long_exact_sequence(&alg, 2, &k, 1).unwrap();
        assert_eq!(les.graded_dim, 1);
        // H^p(V4, F2) has dims 1, 2
        assert_eq!(les.cohomology_dims, vec![1, 2]);
    }

    #[test]
    fn ext_zero_is_higher_invariants() {
        let alg = z3();
        let a = AModule::regular(alg.clone());
        let dims: Vec<usize> = (0..=3).map(|q| ext_zero_dim(&alg, q, &a).unwrap()).collect();
        assert_eq!(dims, vec![1, 2, 3, 3]);
    }
}

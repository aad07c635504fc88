//! Free resolutions over `A = R[Γ]`, `Ext`, and maps induced by module maps.
//!
//! A free module `A^m` has coordinates `(j, h) ↦ j·|Γ| + h`. An A-linear map
//! out of `A^m` is stored by the images of its free generators; its matrix
//! has the column `(j, h)` equal to `h · image_j`. `Hom_A(A^m, V)` is
//! identified with `V^m` by evaluation on the free generators.

use crate::error::{Error, LinalgError};
use crate::field::Scalar;
use crate::linalg::{quotient_map, Matrix, Quotient, Subspace, Vector};

use super::module::{AModule, GroupAlgebra};

/// Matrix of the A-linear map `A^{images.len()} → target` sending the `j`-th
/// free generator to `images[j]`.
pub fn free_map_matrix(target: &AModule, images: &[Vector]) -> Matrix {
    let n = target.algebra().dim();
    let mut cols = Vec::with_capacity(images.len() * n);
    for z in images {
        for h in 0..n {
            cols.push(target.act(h, z));
        }
    }
    Matrix::from_columns(target.field(), target.dim(), &cols)
}

/// The matrix `Hom_A(A^{m_b}, V) → Hom_A(A^{m_a}, V)` induced by
/// `A^{m_a} → A^{m_b}`, `e_j ↦ images[j]`. Block `(j, l)` is `ρ_V(images[j]_l)`.
pub fn hom_pullback(v: &AModule, target_rank: usize, images: &[Vector]) -> Matrix {
    let n = v.algebra().dim();
    let d = v.dim();
    let mut m = Matrix::zeros(v.field(), images.len() * d, target_rank * d);
    for (j, z) in images.iter().enumerate() {
        for l in 0..target_rank {
            let component = &z[l * n..(l + 1) * n];
            if component.iter().all(Scalar::is_zero) {
                continue;
            }
            m.set_block(j * d, l * d, &v.algebra_matrix(component));
        }
    }
    m
}

/// `F_P → … → F_1 → F_0 → M → 0`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    module: AModule,
    ranks: Vec<usize>,
    augmentation: Vec<Vector>,
    boundaries: Vec<Vec<Vector>>,
}

impl FreeResolution {
    /// Assembles a resolution from explicit data and verifies it.
    pub fn from_parts(
        module: AModule,
        augmentation: Vec<Vector>,
        boundaries: Vec<Vec<Vector>>,
    ) -> Result<Self, Error> {
        let mut ranks = vec![augmentation.len()];
        ranks.extend(boundaries.iter().map(Vec::len));
        let res = FreeResolution { module, ranks, augmentation, boundaries };
        res.verify()?;
        Ok(res)
    }

    pub fn module(&self) -> &AModule {
        &self.module
    }

    pub fn algebra(&self) -> &GroupAlgebra {
        self.module.algebra()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Number of boundary maps constructed.
    pub fn length(&self) -> usize {
        self.boundaries.len()
    }

    pub fn augmentation(&self) -> &[Vector] {
        &self.augmentation
    }

    /// Images of the generators of `F_k` in `F_{k-1}`, for `k ≥ 1`.
    pub fn boundary(&self, k: usize) -> &[Vector] {
        &self.boundaries[k - 1]
    }

    pub fn free_module(&self, k: usize) -> AModule {
        AModule::free(self.algebra().clone(), self.ranks[k])
    }

    /// Matrix of `ε : F_0 → M`.
    pub fn augmentation_matrix(&self) -> Matrix {
        free_map_matrix(&self.module, &self.augmentation)
    }

    /// Matrix of `d_k : F_k → F_{k-1}`.
    pub fn boundary_matrix(&self, k: usize) -> Matrix {
        free_map_matrix(&self.free_module(k - 1), self.boundary(k))
    }

    /// Checks `ε` onto, `ε∘d_1 = 0`, `d∘d = 0` and exactness at every `F_k`
    /// below the top.
    pub fn verify(&self) -> Result<(), Error> {
        let n = self.algebra().dim();
        let eps = self.augmentation_matrix();
        if eps.rank() != self.module.dim() {
            return Err(Error::Internal("augmentation is not surjective".into()));
        }
        let mut prev = eps;
        for k in 1..=self.length() {
            let d = self.boundary_matrix(k);
            if !prev.mul(&d).is_zero() {
                return Err(Error::Internal(format!("composite of consecutive maps at F_{k} is nonzero")));
            }
            let kernel_dim = self.ranks[k - 1] * n - prev.rank();
            if d.rank() != kernel_dim {
                return Err(Error::Internal(format!("resolution not exact at F_{}", k - 1)));
            }
            prev = d;
        }
        Ok(())
    }
}

/// A free resolution of `module` with `length` boundary maps.
pub fn free_resolution(module: &AModule, length: usize) -> FreeResolution {
    let alg = module.algebra().clone();
    let full = Subspace::full(module.field(), module.dim());
    let augmentation = module.generating_set(&full);
    let mut kernel = free_map_matrix(module, &augmentation).kernel();
    let mut ranks = vec![augmentation.len()];
    let mut boundaries = Vec::with_capacity(length);
    for _ in 0..length {
        let prev = AModule::free(alg.clone(), *ranks.last().expect("nonempty"));
        let gens = prev.generating_set(&kernel);
        kernel = free_map_matrix(&prev, &gens).kernel();
        ranks.push(gens.len());
        boundaries.push(gens);
    }
    FreeResolution { module: module.clone(), ranks, augmentation, boundaries }
}

/// `Ext^p_A(M, V)` with the cocycles and the projection onto classes.
#[derive(Clone, Debug)]
pub struct ExtGroup {
    degree: usize,
    cocycles: Subspace,
    classes: Quotient,
}

impl ExtGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.classes.dim()
    }

    /// Representatives in `V^{m_p}` of a basis of `Ext^p`.
    pub fn cocycle_basis(&self) -> &[Vector] {
        self.classes.reps()
    }

    pub fn cocycles(&self) -> &Subspace {
        &self.cocycles
    }

    pub fn is_cocycle(&self, v: &[Scalar]) -> bool {
        self.cocycles.contains(v)
    }

    /// Class of a cocycle in the cocycle-basis coordinates.
    pub fn class_of(&self, cocycle: &[Scalar]) -> Vector {
        self.classes.project(cocycle)
    }
}

/// `δ^p : Hom(F_p, V) → Hom(F_{p+1}, V)`.
pub fn coboundary(res: &FreeResolution, v: &AModule, p: usize) -> Matrix {
    hom_pullback(v, res.ranks()[p], res.boundary(p + 1))
}

/// Cohomology of `Hom_A(F_•, V)` at `p`; needs `p + 1` boundary maps.
pub fn ext(res: &FreeResolution, v: &AModule, p: usize) -> Result<ExtGroup, Error> {
    if res.length() < p + 1 {
        return Err(Error::Internal(format!("resolution of length {} cannot give Ext^{p}", res.length())));
    }
    let cocycles = coboundary(res, v, p).kernel();
    let coboundaries = if p == 0 {
        Subspace::zero(v.field(), cocycles.ambient_dim())
    } else {
        coboundary(res, v, p - 1).image()
    };
    let classes = quotient_map(&cocycles, &coboundaries)
        .map_err(|_| Error::Internal("coboundaries are not cocycles".into()))?;
    Ok(ExtGroup { degree: p, cocycles, classes })
}

/// Dimensions of `Ext^0..=Ext^{p_max}`.
pub fn ext_dims(module: &AModule, v: &AModule, p_max: usize) -> Result<Vec<usize>, Error> {
    let res = free_resolution(module, p_max + 1);
    (0..=p_max).map(|p| ext(&res, v, p).map(|e| e.dim())).collect()
}

/// A chain map between resolutions, stored per degree by generator images.
#[derive(Clone, Debug)]
pub struct ChainMap {
    components: Vec<Vec<Vector>>,
}

impl ChainMap {
    pub fn new(components: Vec<Vec<Vector>>) -> Self {
        ChainMap { components }
    }

    pub fn component(&self, k: usize) -> &[Vector] {
        &self.components[k]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Lifts the module map `f : source.module → target.module` (a matrix) to a
/// chain map `F_• → F'_•` through degree `length`.
pub fn lift_chain_map(
    source: &FreeResolution,
    target: &FreeResolution,
    f: &Matrix,
    length: usize,
) -> Result<ChainMap, Error> {
    if length > source.length() || length > target.length() {
        return Err(Error::Internal("resolutions too short for the requested lift".into()));
    }
    let lift_err = |k: usize| Error::Internal(format!("chain map lifting failed in degree {k}"));
    let eps = target.augmentation_matrix();
    let mut current: Vec<Vector> = Vec::with_capacity(source.ranks()[0]);
    for x in source.augmentation() {
        current.push(eps.solve(&f.mul_vec(x)).ok_or_else(|| lift_err(0))?);
    }
    let mut components = vec![current];
    for k in 1..=length {
        let prev_map = free_map_matrix(&target.free_module(k - 1), &components[k - 1]);
        let d_target = target.boundary_matrix(k);
        let mut next = Vec::with_capacity(source.ranks()[k]);
        for y in source.boundary(k) {
            next.push(d_target.solve(&prev_map.mul_vec(y)).ok_or_else(|| lift_err(k))?);
        }
        components.push(next);
    }
    Ok(ChainMap { components })
}

/// Checks that `chain` commutes with the boundaries and covers `f`.
pub fn is_chain_map(source: &FreeResolution, target: &FreeResolution, f: &Matrix, chain: &ChainMap) -> bool {
    let f0 = free_map_matrix(&target.free_module(0), chain.component(0));
    if target.augmentation_matrix().mul(&f0) != f.mul(&source.augmentation_matrix()) {
        return false;
    }
    (1..chain.len()).all(|k| {
        let fk = free_map_matrix(&target.free_module(k), chain.component(k));
        let fk1 = free_map_matrix(&target.free_module(k - 1), chain.component(k - 1));
        target.boundary_matrix(k).mul(&fk) == fk1.mul(&source.boundary_matrix(k))
    })
}

/// `Ext^p(target.module, V) → Ext^p(source.module, V)` along `chain`, in
/// cocycle-basis coordinates: rows index `Ext^p` of the source module.
pub fn induced_on_ext(
    source_ext: &ExtGroup,
    target_ext: &ExtGroup,
    v: &AModule,
    target_rank: usize,
    chain: &ChainMap,
) -> Result<Matrix, Error> {
    let p = source_ext.degree();
    let pull = hom_pullback(v, target_rank, chain.component(p));
    let mut cols = Vec::with_capacity(target_ext.dim());
    for z in target_ext.cocycle_basis() {
        let image = pull.mul_vec(z);
        if !source_ext.is_cocycle(&image) {
            return Err(Error::Internal("pulled-back cocycle is not a cocycle".into()));
        }
        cols.push(source_ext.class_of(&image));
    }
    Ok(Matrix::from_columns(v.field(), source_ext.dim(), &cols))
}

/// The map `Ext^p(M', V) → Ext^p(M, V)` induced by a module map `f : M → M'`.
pub fn ext_induced(
    source: &FreeResolution,
    target: &FreeResolution,
    f: &Matrix,
    v: &AModule,
    p: usize,
) -> Result<Matrix, Error> {
    if f.rows() != target.module().dim() || f.cols() != source.module().dim() {
        return Err(LinalgError::DimensionMismatch { expected: target.module().dim(), found: f.rows() }.into());
    }
    let chain = lift_chain_map(source, target, f, p)?;
    let s = ext(source, v, p)?;
    let t = ext(target, v, p)?;
    induced_on_ext(&s, &t, v, target.ranks()[p], &chain)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::field::FieldSpec;
    use crate::groupalg::group::{parse_cycles, FiniteGroup};

    fn cyclic_algebra(n: usize, field: FieldSpec) -> GroupAlgebra {
        let cycle = format!("({})", (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
        let g = FiniteGroup::enumerate(&["a".into()], &[parse_cycles(&cycle, n).unwrap()], 64).unwrap();
        GroupAlgebra::new(Arc::new(g), field)
    }

    fn s3_algebra(field: FieldSpec) -> GroupAlgebra {
        let g = FiniteGroup::enumerate(
            &["a".into(), "b".into()],
            &[parse_cycles("(1 2)", 3).unwrap(), parse_cycles("(1 2 3)", 3).unwrap()],
            64,
        )
        .unwrap();
        GroupAlgebra::new(Arc::new(g), field)
    }

    fn truncated(alg: &GroupAlgebra, k: usize) -> (AModule, Quotient) {
        let chain = alg.aug_powers(k);
        AModule::regular(alg.clone()).subquotient(&chain[0], &chain[k]).unwrap()
    }

    #[test]
    fn free_module_has_no_higher_ext() {
        let alg = cyclic_algebra(3, FieldSpec::Prime(3));
        let a = AModule::regular(alg.clone());
        let res = free_resolution(&a, 3);
        res.verify().unwrap();
        assert_eq!(res.ranks(), &[1, 0, 0, 0]);
        let k = AModule::trivial(alg);
        assert_eq!(ext_dims(&a, &k, 3).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn periodic_resolution_of_truncated_module() {
        let alg = cyclic_algebra(3, FieldSpec::Prime(3));
        let (m, _) = truncated(&alg, 2);
        let res = free_resolution(&m, 4);
        res.verify().unwrap();
        assert_eq!(res.ranks(), &[1, 1, 1, 1, 1]);
        // kernels alternate between I (dim 2) and I^2 (dim 1)
        let kdims: Vec<usize> = (1..=4).map(|k| res.boundary_matrix(k).kernel().dim()).collect();
        assert_eq!(kdims, vec![2, 1, 2, 1]);
        let k = AModule::trivial(alg);
        assert_eq!(ext_dims(&m, &k, 2).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn semisimple_algebra_has_no_higher_ext() {
        let alg = s3_algebra(FieldSpec::Rationals);
        let (m, _) = truncated(&alg, 1);
        let k = AModule::trivial(alg.clone());
        assert_eq!(ext_dims(&m, &k, 2).unwrap(), vec![1, 0, 0]);
        let regular = AModule::regular(alg);
        assert_eq!(ext_dims(&m, &regular, 2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn identity_induces_identity() {
        let alg = cyclic_algebra(3, FieldSpec::Prime(3));
        let (m, _) = truncated(&alg, 2);
        let res = free_resolution(&m, 3);
        let k = AModule::trivial(alg);
        for p in 0..=2 {
            let id = Matrix::identity(m.field(), m.dim());
            let induced = ext_induced(&res, &res, &id, &k, p).unwrap();
            assert!(induced.is_identity(), "p = {p}");
        }
    }

    #[test]
    fn lifted_maps_are_chain_maps() {
        let alg = cyclic_algebra(3, FieldSpec::Prime(3));
        let (m2, q2) = truncated(&alg, 2);
        let (m1, q1) = truncated(&alg, 1);
        let pi = crate::groupalg::module::induced_map(&q2, &q1).unwrap();
        let r2 = free_resolution(&m2, 3);
        let r1 = free_resolution(&m1, 3);
        let chain = lift_chain_map(&r2, &r1, &pi, 3).unwrap();
        assert!(is_chain_map(&r2, &r1, &pi, &chain));
        let k = AModule::trivial(alg);
        // Ext^1(A/I, k) → Ext^1(A/I^2, k) vanishes.
        let induced = ext_induced(&r2, &r1, &pi, &k, 1).unwrap();
        assert_eq!((induced.rows(), induced.cols()), (1, 1));
        assert!(induced.is_zero());
    }
}

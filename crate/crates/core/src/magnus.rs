//! Truncated Magnus expansion and the quotient `A/I^{Q+1} = T_{≤Q}/J`.
//!
//! A finitely presented group `Γ = F/⟨⟨R⟩⟩` has `R[Γ]/I^{Q+1}` equal to the
//! truncated free tensor algebra `T_{≤Q}` on the generators modulo the
//! two-sided ideal `J` generated by `M(r) − 1` for the relators `r`, where `M`
//! is the Magnus map `s ↦ 1 + X_s`. The image of `I^k` is spanned by the
//! monomials of degree `≥ k`, which gives `N_Γ(k) = dim I^k/I^{k+1}`.
//!
//! Monomials are ordered by degree, then lexicographically by generator
//! index. `J` is kept in echelon form with pivots at the *smallest* monomial
//! of each row, so `J ∩ F_k` is spanned by the rows whose pivot has degree
//! `≥ k` and `N(k) = n^k − #{pivots of degree k}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::MagnusError;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{close_under, is_zero_vector, zero_vector, Echelon, Subspace, Vector};
use crate::words::{GroupPresentation, Word};

/// Default cap on the number of monomials in `T_{≤Q}`.
pub const DEFAULT_MEMORY_CAP: u128 = 2_000_000;

/// Environment variable overriding [`DEFAULT_MEMORY_CAP`].
pub const MEMORY_CAP_ENV: &str = "HOI_MEMORY_CAP_SCALARS";

/// The cap from `HOI_MEMORY_CAP_SCALARS`, or the default when unset or unparsable.
pub fn memory_cap_from_env() -> u128 {
    std::env::var(MEMORY_CAP_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MEMORY_CAP)
}

/// `Σ_{k ≤ degree} n^k`, saturating.
pub fn monomial_count(generators: usize, degree: usize) -> u128 {
    let n = generators as u128;
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=degree {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(n);
    }
    total
}

/// Dense indexing of the monomials of `T_{≤Q}` in degree-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIndex {
    generators: usize,
    degree: usize,
    offsets: Vec<usize>,
    powers: Vec<usize>,
}

impl MonomialIndex {
    pub fn new(generators: usize, degree: usize) -> Self {
        let mut offsets = Vec::with_capacity(degree + 2);
        let mut powers = Vec::with_capacity(degree + 1);
        let mut acc = 0;
        let mut p = 1;
        for _ in 0..=degree {
            offsets.push(acc);
            powers.push(p);
            acc += p;
            p *= generators;
        }
        offsets.push(acc);
        MonomialIndex { generators, degree, offsets, powers }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.offsets[self.degree + 1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of monomials of degree exactly `d`.
    pub fn count_in_degree(&self, d: usize) -> usize {
        self.powers[d]
    }

    pub fn index(&self, monomial: &[usize]) -> usize {
        let d = monomial.len();
        assert!(d <= self.degree, "monomial beyond truncation degree");
        let val = monomial.iter().fold(0, |acc, &g| acc * self.generators + g);
        self.offsets[d] + val
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        self.offsets.partition_point(|&o| o <= idx) - 1
    }

    pub fn monomial(&self, idx: usize) -> Vec<usize> {
        let d = self.degree_of(idx);
        let mut val = idx - self.offsets[d];
        let mut out = vec![0; d];
        for slot in out.iter_mut().rev() {
            *slot = val % self.generators;
            val /= self.generators;
        }
        out
    }

    /// Index of `X_g · m`, or `None` when it exceeds the truncation degree.
    pub fn left_mul(&self, g: usize, idx: usize) -> Option<usize> {
        let d = self.degree_of(idx);
        (d < self.degree).then(|| self.offsets[d + 1] + g * self.powers[d] + (idx - self.offsets[d]))
    }

    /// Index of `m · X_g`, or `None` when it exceeds the truncation degree.
    pub fn right_mul(&self, g: usize, idx: usize) -> Option<usize> {
        let d = self.degree_of(idx);
        (d < self.degree).then(|| self.offsets[d + 1] + (idx - self.offsets[d]) * self.generators + g)
    }
}

/// An element of the truncated free tensor algebra `T_{≤Q}`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedTensor {
    field: FieldSpec,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Scalar>,
}

impl TruncatedTensor {
    pub fn zero(field: FieldSpec, degree: usize) -> Self {
        TruncatedTensor { field, degree, coeffs: BTreeMap::new() }
    }

    pub fn one(field: FieldSpec, degree: usize) -> Self {
        Self::monomial(field, degree, Vec::new(), field.one())
    }

    pub fn monomial(field: FieldSpec, degree: usize, word: Vec<usize>, c: Scalar) -> Self {
        let mut t = Self::zero(field, degree);
        t.add_term(word, &c);
        t
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coefficient(&self, monomial: &[usize]) -> Scalar {
        self.coeffs.get(monomial).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero terms in degree-lexicographic order.
    pub fn terms(&self) -> Vec<(&[usize], &Scalar)> {
        let mut t: Vec<_> = self.coeffs.iter().map(|(k, v)| (k.as_slice(), v)).collect();
        t.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
        t
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, monomial: Vec<usize>, c: &Scalar) {
        if monomial.len() > self.degree || c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&monomial) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.coeffs.remove(&monomial);
                }
            }
            None => {
                self.coeffs.insert(monomial, c.clone());
            }
        }
    }

    pub fn add(&self, other: &TruncatedTensor) -> TruncatedTensor {
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &TruncatedTensor) -> TruncatedTensor {
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    /// Product truncated at degree `Q`.
    pub fn mul(&self, other: &TruncatedTensor) -> TruncatedTensor {
        let mut out = Self::zero(self.field, self.degree.min(other.degree));
        for (m1, c1) in &self.coeffs {
            for (m2, c2) in &other.coeffs {
                if m1.len() + m2.len() > out.degree {
                    continue;
                }
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_term(m, &(c1 * c2));
            }
        }
        out
    }

    pub fn to_dense(&self, index: &MonomialIndex) -> Vector {
        let mut v = zero_vector(self.field, index.len());
        for (m, c) in &self.coeffs {
            if m.len() <= index.degree() {
                v[index.index(m)] = c.clone();
            }
        }
        v
    }

    pub fn from_dense(field: FieldSpec, index: &MonomialIndex, v: &[Scalar]) -> Self {
        let mut t = Self::zero(field, index.degree());
        for (i, c) in v.iter().enumerate() {
            t.add_term(index.monomial(i), c);
        }
        t
    }

    /// Renders each generator as its uppercased name.
    pub fn display<'a>(&'a self, names: &'a [String]) -> TensorDisplay<'a> {
        TensorDisplay { t: self, names }
    }
}

impl fmt::Debug for TruncatedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.coeffs.keys().flatten().copied().max().unwrap_or(0)).map(|i| format!("X{i}")).collect();
        write!(f, "{}", self.display(&names))
    }
}

pub struct TensorDisplay<'a> {
    t: &'a TruncatedTensor,
    names: &'a [String],
}

impl fmt::Display for TensorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.t.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let mono = if m.is_empty() {
                String::new()
            } else {
                m.iter().map(|&g| self.names[g].to_uppercase()).collect::<Vec<_>>().join("")
            };
            let coeff = c.to_string();
            let (sign, mag) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            if i == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mag.as_str(), mono.is_empty()) {
                (_, true) => f.write_str(&mag)?,
                ("1", false) => f.write_str(&mono)?,
                (_, false) => write!(f, "{mag}{mono}")?,
            }
        }
        Ok(())
    }
}

/// Magnus image of `w` in `T_{≤Q}`: `s ↦ 1 + X_s`, `s⁻¹ ↦ Σ_k (−X_s)^k`.
pub fn magnus_expand(w: &Word, degree: usize, field: FieldSpec) -> TruncatedTensor {
    let mut acc = TruncatedTensor::one(field, degree);
    for l in w.letters() {
        let mut next = TruncatedTensor::zero(field, degree);
        for (m, c) in &acc.coeffs {
            let room = degree - m.len();
            let max_power = if l.inverse { room } else { room.min(1) };
            let mut mono = m.clone();
            for k in 0..=max_power {
                let sign = if l.inverse && k % 2 == 1 { -c } else { c.clone() };
                next.add_term(mono.clone(), &sign);
                mono.push(l.generator);
            }
        }
        acc = next;
    }
    acc
}

/// `N(0..=Q)` with `N(k) = dim I^k/I^{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDims(pub Vec<usize>);

impl GradedDims {
    pub fn get(&self, k: usize) -> Option<usize> {
        self.0.get(k).copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn max_degree(&self) -> usize {
        self.0.len() - 1
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `T_{≤Q}/J`, the truncated group algebra of a presentation.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    field: FieldSpec,
    index: MonomialIndex,
    ideal: Echelon,
    is_leading: Vec<bool>,
}

impl QuotientAlgebra {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn index(&self) -> &MonomialIndex {
        &self.index
    }

    pub fn ideal_dim(&self) -> usize {
        self.ideal.dim()
    }

    pub fn dim(&self) -> usize {
        self.index.len() - self.ideal.dim()
    }

    /// Canonical RREF basis of `J`.
    pub fn ideal(&self) -> Subspace {
        self.ideal.clone().into_subspace()
    }

    /// Leading monomials of `J` (as indices), sorted.
    pub fn leading_monomials(&self) -> Vec<usize> {
        let mut p = self.ideal.pivots();
        p.sort_unstable();
        p
    }

    /// Monomials spanning a complement of `J`; a basis of `A/I^{Q+1}`.
    pub fn standard_monomials(&self) -> Vec<Vec<usize>> {
        (0..self.index.len()).filter(|&i| !self.is_leading[i]).map(|i| self.index.monomial(i)).collect()
    }

    pub fn contains(&self, t: &TruncatedTensor) -> bool {
        self.ideal.contains(&t.to_dense(&self.index))
    }

    /// Unique representative of `t + J` supported on standard monomials.
    pub fn normal_form(&self, t: &TruncatedTensor) -> TruncatedTensor {
        let r = self.ideal.reduce(t.to_dense(&self.index));
        TruncatedTensor::from_dense(self.field, &self.index, &r)
    }

    pub fn graded_dims(&self) -> GradedDims {
        let d = self.index.degree();
        let mut dims: Vec<usize> = (0..=d).map(|k| self.index.count_in_degree(k)).collect();
        for p in self.ideal.pivots() {
            dims[self.index.degree_of(p)] -= 1;
        }
        GradedDims(dims)
    }
}

/// Builds `T_{≤Q}/J` for `pres`, closing the relator images under left and
/// right multiplication by the degree-one generators.
pub fn quotient_algebra(
    pres: &GroupPresentation,
    field: FieldSpec,
    degree: usize,
    cap: u128,
) -> Result<QuotientAlgebra, MagnusError> {
    let n = pres.num_generators();
    let required = monomial_count(n, degree);
    if required > cap {
        return Err(MagnusError::MemoryCap { required, cap });
    }
    let index = MonomialIndex::new(n, degree);
    let len = index.len();
    let one = TruncatedTensor::one(field, degree);
    let seed: Vec<Vector> = pres
        .relators()
        .iter()
        .map(|r| magnus_expand(r, degree, field).sub(&one).to_dense(&index))
        .filter(|v| !is_zero_vector(v))
        .collect();

    let shift = |targets: Vec<Option<usize>>| {
        move |v: &[Scalar]| {
            let mut out = zero_vector(field, len);
            for (i, c) in v.iter().enumerate() {
                if let (false, Some(t)) = (c.is_zero(), targets[i]) {
                    out[t] = c.clone();
                }
            }
            out
        }
    };
    let mut ops = Vec::with_capacity(2 * n);
    for g in 0..n {
        ops.push(shift((0..len).map(|i| index.left_mul(g, i)).collect()));
        ops.push(shift((0..len).map(|i| index.right_mul(g, i)).collect()));
    }
    let ideal = close_under(Echelon::new(field, len), seed, &ops);
    let mut is_leading = vec![false; len];
    for p in ideal.pivots() {
        is_leading[p] = true;
    }
    Ok(QuotientAlgebra { field, index, ideal, is_leading })
}

/// `N(0..=Q)` for the presentation.
pub fn graded_dims(pres: &GroupPresentation, field: FieldSpec, degree: usize, cap: u128) -> Result<GradedDims, MagnusError> {
    Ok(quotient_algebra(pres, field, degree, cap)?.graded_dims())
}

//! Quadratic functors of a free abelian group `A = ℤ^r` and the short exact
//! sequences `0 → SP²(A) → P₂(A) → A → 0` and
//! `0 → SP²(A) → Γ(A) → A⊗ℤ₂ → 0`.

pub mod smith;

use serde::Serialize;
use thiserror::Error;

use smith::{smith_normal_form, Matrix};

/// Largest rank accepted by [`verify_sequences`].
pub const MAX_RANK: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("rank {rank} exceeds the bound {bound}")]
    RankBound { rank: usize, bound: usize },
    #[error("endomorphism matrix must be {rank}x{rank}")]
    BadEndomorphism { rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAbelian {
    pub rank: usize,
    pub labels: Vec<String>,
}

impl FreeAbelian {
    pub fn new(rank: usize) -> FreeAbelian {
        FreeAbelian {
            rank,
            labels: (1..=rank).map(|i| format!("e{i}")).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FunctorKind {
    Sp2,
    GammaW,
    P2,
    TensorZ2,
}

/// `ℤ^{basis.len()}` modulo `torsion[i]·eᵢ` for each listed entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctorValue {
    pub kind: FunctorKind,
    pub basis: Vec<String>,
    /// Order of each basis element, `None` for infinite order.
    pub orders: Vec<Option<u64>>,
}

impl FunctorValue {
    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|o| o.is_none()).count()
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<u64> {
        self.orders.iter().copied().product()
    }
}

/// Pairs `i ≤ j` in lexicographic order.
fn sym_pairs(r: usize) -> Vec<(usize, usize)> {
    (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect()
}

fn pair_index(r: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // Pairs before row i: r + (r−1) + … + (r−i+1).
    i * r - i * (i.saturating_sub(1)) / 2 + (j - i)
}

/// Γ basis: `γ(eᵢ)` for all `i`, then `[eᵢ,eⱼ]` for `i < j`.
fn gamma_cross_index(r: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    r + i * (2 * r - i - 1) / 2 + (j - i - 1)
}

pub fn functor_data(kind: FunctorKind, a: &FreeAbelian) -> FunctorValue {
    let r = a.rank;
    let l = &a.labels;
    let basis: Vec<String> = match kind {
        FunctorKind::Sp2 => sym_pairs(r)
            .into_iter()
            .map(|(i, j)| format!("{}·{}", l[i], l[j]))
            .collect(),
        FunctorKind::GammaW => {
            let mut b: Vec<String> = l.iter().map(|e| format!("γ({e})")).collect();
            for i in 0..r {
                for j in i + 1..r {
                    b.push(format!("[{},{}]", l[i], l[j]));
                }
            }
            b
        }
        FunctorKind::P2 => {
            let mut b: Vec<String> = l.iter().map(|e| format!("({e}−1)")).collect();
            b.extend(
                sym_pairs(r)
                    .into_iter()
                    .map(|(i, j)| format!("({}−1)({}−1)", l[i], l[j])),
            );
            b
        }
        FunctorKind::TensorZ2 => l.iter().map(|e| format!("{e}⊗1")).collect(),
    };
    let orders = match kind {
        FunctorKind::TensorZ2 => vec![Some(2); basis.len()],
        _ => vec![None; basis.len()],
    };
    FunctorValue {
        kind,
        basis,
        orders,
    }
}

/// Integer matrix of a homomorphism between functor values; columns are
/// images of domain basis elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrixMap {
    pub domain: usize,
    pub codomain: usize,
    pub matrix: Matrix,
}

impl IntMatrixMap {
    fn new(codomain: usize, domain: usize) -> IntMatrixMap {
        IntMatrixMap {
            domain,
            codomain,
            matrix: Matrix::zeros(codomain, domain),
        }
    }

    pub fn compose(&self, first: &IntMatrixMap) -> IntMatrixMap {
        IntMatrixMap {
            domain: first.domain,
            codomain: self.codomain,
            matrix: self.matrix.mul(&first.matrix),
        }
    }
}

/// `SP² → P₂`, `a·b ↦ (a−1)(b−1)`.
pub fn sp2_to_p2(r: usize) -> IntMatrixMap {
    let pairs = sym_pairs(r);
    let mut m = IntMatrixMap::new(r + pairs.len(), pairs.len());
    for (k, _) in pairs.iter().enumerate() {
        m.matrix[(r + k, k)] = 1;
    }
    m
}

/// `P₂ → A`, `(a−1) ↦ a`, quadratic terms to 0.
pub fn p2_to_a(r: usize) -> IntMatrixMap {
    let n = r + r * (r + 1) / 2;
    let mut m = IntMatrixMap::new(r, n);
    for i in 0..r {
        m.matrix[(i, i)] = 1;
    }
    m
}

/// `SP² → Γ`, `a·b ↦ γ(a+b) − γ(a) − γ(b)`; so `eᵢ·eⱼ ↦ [eᵢ,eⱼ]` and
/// `eᵢ·eᵢ ↦ 2γ(eᵢ)`.
pub fn sp2_to_gamma(r: usize) -> IntMatrixMap {
    let pairs = sym_pairs(r);
    let mut m = IntMatrixMap::new(pairs.len(), pairs.len());
    for (k, &(i, j)) in pairs.iter().enumerate() {
        if i == j {
            m.matrix[(i, k)] = 2;
        } else {
            m.matrix[(gamma_cross_index(r, i, j), k)] = 1;
        }
    }
    m
}

/// `Γ → A⊗ℤ₂`, `γ(a) ↦ a⊗1`; brackets map to 0.
pub fn gamma_to_tensor(r: usize) -> IntMatrixMap {
    let n = r * (r + 1) / 2;
    let mut m = IntMatrixMap::new(r, n);
    for i in 0..r {
        m.matrix[(i, i)] = 1;
    }
    m
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceCheck {
    pub name: String,
    pub left_injective: bool,
    pub composite_zero: bool,
    pub middle_exact: bool,
    pub right_surjective: bool,
}

impl SequenceCheck {
    pub fn exact(&self) -> bool {
        self.left_injective && self.composite_zero && self.middle_exact && self.right_surjective
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctorReport {
    pub rank: usize,
    pub sp2_rank: usize,
    pub gamma_rank: usize,
    pub p2_rank: usize,
    pub tensor_z2_order: u64,
    /// Invariant factors of `coker(SP² → Γ)`.
    pub cokernel_invariants: Vec<u64>,
    pub cokernel_order: u64,
    pub o1: SequenceCheck,
    pub o2: SequenceCheck,
    pub exact: bool,
}

/// `0 → ℤ^a →f ℤ^b →g ℤ^c / ⟨relations⟩ → 0`, relations given as columns.
fn check_sequence(
    name: &str,
    f: &IntMatrixMap,
    g: &IntMatrixMap,
    relations: &Matrix,
) -> SequenceCheck {
    let sf = smith_normal_form(&f.matrix);
    let left_injective = sf.rank == f.domain;

    // Every column of g·f must lie in the relation lattice.
    let gf = g.compose(f).matrix;
    let sr = smith_normal_form(relations);
    let in_relations = |v: &[i128]| v.iter().all(|&x| x == 0) || sr.solve(v).is_some();
    let composite_zero = (0..gf.cols()).all(|j| in_relations(&gf.column(j)));

    // ker g = { x : g x ∈ relations }: kernel of [g | relations], first block.
    let combined = g.matrix.hconcat(relations);
    let sc = smith_normal_form(&combined);
    let middle_exact = sc
        .kernel_basis()
        .iter()
        .all(|k| sf.solve(&k[..g.domain]).is_some());

    // g is onto iff [g | relations] has cokernel 0.
    let right_surjective = sc.cokernel_invariants().is_empty();

    SequenceCheck {
        name: name.to_string(),
        left_injective,
        composite_zero,
        middle_exact,
        right_surjective,
    }
}

pub fn verify_sequences(a: &FreeAbelian) -> Result<FunctorReport, FunctorError> {
    verify_sequences_bounded(a, MAX_RANK)
}

pub fn verify_sequences_bounded(a: &FreeAbelian, bound: usize) -> Result<FunctorReport, FunctorError> {
    let r = a.rank;
    if r > bound {
        return Err(FunctorError::RankBound { rank: r, bound });
    }
    let sp2 = functor_data(FunctorKind::Sp2, a);
    let gamma = functor_data(FunctorKind::GammaW, a);
    let p2 = functor_data(FunctorKind::P2, a);
    let tensor = functor_data(FunctorKind::TensorZ2, a);

    let o1 = check_sequence(
        "0 → SP²(A) → P₂(A) → A → 0",
        &sp2_to_p2(r),
        &p2_to_a(r),
        &Matrix::zeros(r, 0),
    );
    let mut two = Matrix::zeros(r, r);
    for i in 0..r {
        two[(i, i)] = 2;
    }
    let o2 = check_sequence(
        "0 → SP²(A) → Γ(A) → A⊗ℤ₂ → 0",
        &sp2_to_gamma(r),
        &gamma_to_tensor(r),
        &two,
    );

    let s = smith_normal_form(&sp2_to_gamma(r).matrix);
    let cokernel_invariants: Vec<u64> = s
        .cokernel_invariants()
        .into_iter()
        .map(|x| x as u64)
        .collect();
    let cokernel_order = if cokernel_invariants.contains(&0) {
        0
    } else {
        cokernel_invariants.iter().product()
    };
    let exact = o1.exact() && o2.exact();
    Ok(FunctorReport {
        rank: r,
        sp2_rank: sp2.free_rank(),
        gamma_rank: gamma.free_rank(),
        p2_rank: p2.free_rank(),
        tensor_z2_order: tensor.order().unwrap_or(0),
        cokernel_invariants,
        cokernel_order,
        o1,
        o2,
        exact,
    })
}

fn binomial2(n: i128) -> i128 {
    n * (n - 1) / 2
}

/// Maps induced by an endomorphism `φ` of `A`, given by its matrix
/// (columns are images of basis vectors).
#[derive(Debug, Clone)]
pub struct InducedMaps {
    pub a: Matrix,
    pub sp2: Matrix,
    pub gamma: Matrix,
    pub p2: Matrix,
    pub tensor_z2: Matrix,
}

pub fn induced_maps(phi: &Matrix) -> Result<InducedMaps, FunctorError> {
    let r = phi.rows();
    if phi.cols() != r {
        return Err(FunctorError::BadEndomorphism { rank: r });
    }
    let pairs = sym_pairs(r);
    let np = pairs.len();

    // φ(eᵢ)φ(eⱼ) in the symmetric basis.
    let mut sp2 = Matrix::zeros(np, np);
    for (col, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..r {
            for l in 0..r {
                sp2[(pair_index(r, k, l), col)] += phi[(k, i)] * phi[(l, j)];
            }
        }
    }

    // γ(Σ mₖeₖ) = Σ mₖ²γ(eₖ) + Σ_{k<l} mₖmₗ[eₖ,eₗ], and [a,a] = 2γ(a).
    let mut gamma = Matrix::zeros(np, np);
    for i in 0..r {
        for k in 0..r {
            gamma[(k, i)] += phi[(k, i)] * phi[(k, i)];
            for l in k + 1..r {
                gamma[(gamma_cross_index(r, k, l), i)] += phi[(k, i)] * phi[(l, i)];
            }
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            let col = gamma_cross_index(r, i, j);
            for k in 0..r {
                for l in 0..r {
                    let c = phi[(k, i)] * phi[(l, j)];
                    if k == l {
                        gamma[(k, col)] += 2 * c;
                    } else {
                        gamma[(gamma_cross_index(r, k, l), col)] += c;
                    }
                }
            }
        }
    }

    // uᵢ ↦ Πₖ(1+uₖ)^{mₖ} − 1 mod I³, and uᵢuⱼ ↦ φ(uᵢ)φ(uⱼ) mod I³.
    let mut p2 = Matrix::zeros(r + np, r + np);
    for i in 0..r {
        for k in 0..r {
            let m = phi[(k, i)];
            p2[(k, i)] += m;
            p2[(r + pair_index(r, k, k), i)] += binomial2(m);
            for l in k + 1..r {
                p2[(r + pair_index(r, k, l), i)] += m * phi[(l, i)];
            }
        }
    }
    for (col, _) in pairs.iter().enumerate() {
        for row in 0..np {
            p2[(r + row, r + col)] = sp2[(row, col)];
        }
    }

    let mut tensor_z2 = Matrix::zeros(r, r);
    for i in 0..r {
        for k in 0..r {
            tensor_z2[(k, i)] = phi[(k, i)].rem_euclid(2);
        }
    }
    Ok(InducedMaps {
        a: phi.clone(),
        sp2,
        gamma,
        p2,
        tensor_z2,
    })
}

/// Whether both sequences commute with the maps induced by `φ`.
pub fn naturality_holds(phi: &Matrix) -> Result<bool, FunctorError> {
    let r = phi.rows();
    let m = induced_maps(phi)?;
    let f1 = sp2_to_p2(r).matrix;
    let g1 = p2_to_a(r).matrix;
    let f2 = sp2_to_gamma(r).matrix;
    let g2 = gamma_to_tensor(r).matrix;
    let eq_mod2 = |x: &Matrix, y: &Matrix| {
        (0..x.rows()).all(|i| (0..x.cols()).all(|j| (x[(i, j)] - y[(i, j)]).rem_euclid(2) == 0))
    };
    Ok(m.p2.mul(&f1) == f1.mul(&m.sp2)
        && m.a.mul(&g1) == g1.mul(&m.p2)
        && m.gamma.mul(&f2) == f2.mul(&m.sp2)
        && eq_mod2(&m.tensor_z2.mul(&g2), &g2.mul(&m.gamma)))
}

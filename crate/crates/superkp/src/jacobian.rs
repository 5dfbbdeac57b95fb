//! Period data of generic super curves: the normalized period matrix
//! `Π = [[0, 1_g], [Z_o, Z_e]]`, the connecting map, cohomology of the dual
//! curve through complex expansions of `Z_o`, bilinear relations,
//! projectedness and Riemann–Roch bookkeeping.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion;
use crate::grassmann::{GrassmannScalar, Parity};
use crate::linalg::{self, CMatrix};
use crate::matrix::LambdaMatrix;
use crate::supermatrix::SuperMatrix;

/// Relative singular-value threshold for ranks of expanded maps.
const RANK_RTOL: f64 = 1e-10;

/// Even block `Z_e` (`g×g`) and odd block `Z_o` (`g×(g−1)`) of a normalized
/// period matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PeriodDataRepr", into = "PeriodDataRepr")]
pub struct PeriodData {
    z_e: LambdaMatrix,
    z_o: LambdaMatrix,
}

impl PeriodData {
    pub fn new(z_e: LambdaMatrix, z_o: LambdaMatrix) -> Result<Self> {
        let g = z_e.nrows();
        if g == 0 || z_e.ncols() != g {
            return Err(Error::Dimension(format!("Z_e must be g×g with g ≥ 1, got {}x{}", g, z_e.ncols())));
        }
        if z_o.nrows() != g || z_o.ncols() != g - 1 {
            return Err(Error::Dimension(format!("Z_o must be {g}×{}, got {}x{}", g - 1, z_o.nrows(), z_o.ncols())));
        }
        if z_e.n_generators() != z_o.n_generators() {
            return Err(Error::Dimension("Z_e and Z_o live over different algebras".into()));
        }
        if z_e.entries().any(|x| !x.is_even()) {
            return Err(Error::Parity("Z_e has a non-even entry".into()));
        }
        if z_o.entries().any(|x| !x.is_odd()) {
            return Err(Error::Parity("Z_o has a non-odd entry".into()));
        }
        let body = z_e.body();
        let im = nalgebra::DMatrix::from_fn(g, g, |i, j| 0.5 * (body[(i, j)].im + body[(j, i)].im));
        if im.symmetric_eigenvalues().iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Domain("imaginary part of the reduced Z_e is not positive definite".into()));
        }
        Ok(PeriodData { z_e, z_o })
    }

    pub fn genus(&self) -> usize {
        self.z_e.nrows()
    }

    pub fn n_generators(&self) -> usize {
        self.z_e.n_generators()
    }

    pub fn z_e(&self) -> &LambdaMatrix {
        &self.z_e
    }

    pub fn z_o(&self) -> &LambdaMatrix {
        &self.z_o
    }

    /// `Π = [[0, 1_g], [Z_o, Z_e]]` with rows `(0|2g)` and columns `(g−1|g)`.
    pub fn full_period_matrix(&self) -> SuperMatrix {
        let g = self.genus();
        let n = self.n_generators();
        let m = LambdaMatrix::from_fn(n, 2 * g, 2 * g - 1, |i, j| match (i < g, j < g - 1) {
            (true, true) => GrassmannScalar::zero(n),
            (true, false) => GrassmannScalar::real(n, if i == j - (g - 1) { 1.0 } else { 0.0 }),
            (false, true) => self.z_o.get(i - g, j).clone(),
            (false, false) => self.z_e.get(i - g, j - (g - 1)).clone(),
        });
        SuperMatrix::new((0, 2 * g), (g - 1, g), m).expect("shape matches by construction")
    }
}

#[derive(Serialize, Deserialize)]
struct PeriodDataRepr {
    g: usize,
    #[serde(rename = "Z_e")]
    z_e: Vec<Vec<GrassmannScalar>>,
    #[serde(rename = "Z_o")]
    z_o: Vec<Vec<GrassmannScalar>>,
}

impl TryFrom<PeriodDataRepr> for PeriodData {
    type Error = Error;

    fn try_from(r: PeriodDataRepr) -> Result<Self> {
        let n = r.z_e.iter().chain(&r.z_o).flatten().map(GrassmannScalar::n_generators).max().unwrap_or(0);
        let lift = |rows: Vec<Vec<GrassmannScalar>>| -> Vec<Vec<GrassmannScalar>> {
            rows.into_iter().map(|row| row.into_iter().map(|x| x.embed(n)).collect()).collect()
        };
        if r.z_e.len() != r.g || r.z_o.len() != r.g {
            return Err(Error::Dimension(format!("expected {} rows in Z_e and Z_o", r.g)));
        }
        let z_e = LambdaMatrix::from_rows(n, lift(r.z_e))?;
        let z_o = if r.g == 1 { LambdaMatrix::zeros(n, 1, 0) } else { LambdaMatrix::from_rows(n, lift(r.z_o))? };
        PeriodData::new(z_e, z_o)
    }
}

impl From<PeriodData> for PeriodDataRepr {
    fn from(pd: PeriodData) -> Self {
        PeriodDataRepr { g: pd.genus(), z_e: pd.z_e.to_rows(), z_o: pd.z_o.to_rows() }
    }
}

/// `Q = [[0, Z_oᵗ], [−Z_o, Z_eᵗ − Z_e]]`, shape `(g−1|g)×(g−1|g)`.
pub fn connecting_map(pd: &PeriodData) -> SuperMatrix {
    let g = pd.genus();
    let n = pd.n_generators();
    let zo_t = pd.z_o.transpose();
    let skew = &pd.z_e.transpose() - &pd.z_e;
    let zero = LambdaMatrix::zeros(n, g - 1, g - 1);
    SuperMatrix::from_blocks(&zero, &zo_t, &-&pd.z_o, &skew).expect("block sizes match by construction")
}

/// `Q` computed as the product `Πᵗ I Π` with `I = [[0, −1], [1, 0]]`.
pub fn connecting_map_product(pd: &PeriodData) -> SuperMatrix {
    let g = pd.genus();
    let n = pd.n_generators();
    let pi = pd.full_period_matrix().into_matrix();
    let form = LambdaMatrix::from_fn(n, 2 * g, 2 * g, |i, j| {
        let v = if j == i + g {
            -1.0
        } else if i == j + g {
            1.0
        } else {
            0.0
        };
        GrassmannScalar::real(n, v)
    });
    let q = &(&pi.transpose() * &form) * &pi;
    SuperMatrix::new((g - 1, g), (g - 1, g), q).expect("shape matches by construction")
}

/// Complex dimensions of a graded `Λ`-module given by a complex expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModuleDimension {
    pub dim: usize,
    pub dim_even: usize,
    pub dim_odd: usize,
    /// Whether the module is free over `Λ`.
    pub free: bool,
    /// Rank over `Λ` when free.
    pub rank: Option<usize>,
}

/// Even/odd ranks of a free graded `Λ`-module, `(even | odd)`.
pub type SuperRank = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub h0_structure: SuperRank,
    pub h1_structure: SuperRank,
    pub h0_berezinian: SuperRank,
    pub h1_berezinian: SuperRank,
}

impl CohomologyTable {
    /// Ranks for a generic super curve of genus `g`.
    pub fn generic_curve(g: usize) -> Self {
        CohomologyTable { h0_structure: (1, 0), h1_structure: (g, g - 1), h0_berezinian: (g - 1, g), h1_berezinian: (0, 1) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualCohomologyReport {
    pub genus: usize,
    pub n_generators: usize,
    /// `Ker(Z_o : Λ^{g−1} → Λ^g)`, isomorphic to `H⁰(Ô)/Λ`.
    pub ker_zo: ModuleDimension,
    /// `Coker(Z_o)`, isomorphic to `H¹(Ô)`.
    pub coker_zo: ModuleDimension,
    /// `Ker(Z_oᵗ : Λ^g → Λ^{g−1})`, isomorphic to `H⁰(B̂er)`.
    pub ker_zo_t: ModuleDimension,
    /// `Coker(Z_oᵗ)`, a submodule of `H¹(B̂er)` with quotient `Λ`.
    pub coker_zo_t: ModuleDimension,
    /// `dim Ker + dim Im = dim source` for both maps, overall and per parity.
    pub rank_nullity: bool,
    /// Ranks of the dual curve cohomology, when all four modules are free.
    pub dual_table: Option<CohomologyTable>,
    /// Curve table rebuilt from the expansions as `H⁰(Ber) = Ker Z_o | Ker Z_oᵗ`
    /// and `H¹(O) = Coker Z_o | Coker Z_oᵗ`; meaningful when `Z_o = 0`.
    pub split_table: Option<CohomologyTable>,
}

/// Dimensions of kernel and cokernel of a homogeneous odd map, expanded.
struct ExpandedMap {
    n: usize,
    source_blocks: usize,
    target_blocks: usize,
    full: CMatrix,
}

impl ExpandedMap {
    fn new(m: &LambdaMatrix) -> Self {
        ExpandedMap { n: m.n_generators(), source_blocks: m.ncols(), target_blocks: m.nrows(), full: expansion::column_action(m) }
    }

    fn coordinates(&self, blocks: usize, parity: Option<Parity>) -> Vec<usize> {
        let dim = 1usize << self.n;
        (0..blocks * dim).filter(|&k| parity.map_or(true, |p| Parity::of_mask((k % dim) as u32) == p)).collect()
    }

    fn restricted(&self, rows: Option<Parity>, cols: Option<Parity>) -> CMatrix {
        let r = self.coordinates(self.target_blocks, rows);
        let c = self.coordinates(self.source_blocks, cols);
        CMatrix::from_fn(r.len(), c.len(), |i, j| self.full[(r[i], c[j])])
    }

    fn generator_actions(&self, blocks: usize) -> Vec<CMatrix> {
        (0..self.n)
            .map(|i| {
                let b = GrassmannScalar::generator(self.n, i);
                let mut m = LambdaMatrix::zeros(self.n, blocks, blocks);
                for k in 0..blocks {
                    m.set(k, k, b.clone());
                }
                expansion::column_action(&m)
            })
            .collect()
    }

    fn kernel(&self) -> ModuleDimension {
        let basis = linalg::null_space(&self.full, RANK_RTOL);
        let dim = basis.ncols();
        let mut spanning: Vec<CMatrix> = Vec::new();
        for act in self.generator_actions(self.source_blocks) {
            spanning.push(&act * &basis);
        }
        let maximal = hstack(basis.nrows(), &spanning);
        let minimal_generators = dim - linalg::rank(&maximal, RANK_RTOL);
        // Graded pieces: the map sends even coordinates to odd ones and back.
        let dim_even = self.coordinates(self.source_blocks, Some(Parity::Even)).len()
            - linalg::rank(&self.restricted(None, Some(Parity::Even)), RANK_RTOL);
        let dim_odd = self.coordinates(self.source_blocks, Some(Parity::Odd)).len()
            - linalg::rank(&self.restricted(None, Some(Parity::Odd)), RANK_RTOL);
        module_dimension(self.n, dim, dim_even, dim_odd, minimal_generators)
    }

    fn cokernel(&self) -> ModuleDimension {
        let total = self.target_blocks << self.n;
        let image_rank = linalg::rank(&self.full, RANK_RTOL);
        let dim = total - image_rank;
        let mut spanning = vec![self.full.clone()];
        spanning.extend(self.generator_actions(self.target_blocks));
        let with_maximal = linalg::rank(&hstack(total, &spanning), RANK_RTOL);
        let minimal_generators = total - with_maximal;
        let dim_even = self.coordinates(self.target_blocks, Some(Parity::Even)).len()
            - linalg::rank(&self.restricted(Some(Parity::Even), None), RANK_RTOL);
        let dim_odd = self.coordinates(self.target_blocks, Some(Parity::Odd)).len()
            - linalg::rank(&self.restricted(Some(Parity::Odd), None), RANK_RTOL);
        module_dimension(self.n, dim, dim_even, dim_odd, minimal_generators)
    }

    fn rank_nullity(&self, ker: &ModuleDimension) -> bool {
        let source_even = self.coordinates(self.source_blocks, Some(Parity::Even)).len();
        let source_odd = self.coordinates(self.source_blocks, Some(Parity::Odd)).len();
        let rank_even = linalg::rank(&self.restricted(None, Some(Parity::Even)), RANK_RTOL);
        let rank_odd = linalg::rank(&self.restricted(None, Some(Parity::Odd)), RANK_RTOL);
        let rank = linalg::rank(&self.full, RANK_RTOL);
        ker.dim + rank == self.source_blocks << self.n
            && ker.dim_even + rank_even == source_even
            && ker.dim_odd + rank_odd == source_odd
            && ker.dim_even + ker.dim_odd == ker.dim
            && rank_even + rank_odd == rank
    }
}

fn hstack(rows: usize, parts: &[CMatrix]) -> CMatrix {
    let cols: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut c0 = 0;
    for p in parts {
        out.view_mut((0, c0), (rows, p.ncols())).copy_from(p);
        c0 += p.ncols();
    }
    out
}

/// A finitely generated module `M` over `Λ` is free exactly when
/// `dim M = 2ⁿ · dim(M/𝔪M)`.
fn module_dimension(n: usize, dim: usize, dim_even: usize, dim_odd: usize, minimal_generators: usize) -> ModuleDimension {
    let free = dim == minimal_generators << n;
    ModuleDimension { dim, dim_even, dim_odd, free, rank: free.then_some(minimal_generators) }
}

/// Kernel and cokernel dimensions of `Z_o` and `Z_oᵗ` over the monomial basis.
pub fn dual_cohomology(pd: &PeriodData) -> DualCohomologyReport {
    let g = pd.genus();
    let zo = ExpandedMap::new(&pd.z_o);
    let zo_t = ExpandedMap::new(&pd.z_o.transpose());
    let ker_zo = zo.kernel();
    let coker_zo = zo.cokernel();
    let ker_zo_t = zo_t.kernel();
    let coker_zo_t = zo_t.cokernel();
    let rank_nullity = zo.rank_nullity(&ker_zo) && zo_t.rank_nullity(&ker_zo_t);
    let ranks = [ker_zo.rank, coker_zo.rank, ker_zo_t.rank, coker_zo_t.rank];
    let dual_table = match ranks {
        [Some(k), Some(c), Some(kt), Some(ct)] => Some(CohomologyTable {
            h0_structure: (1, k),
            h1_structure: (c, 0),
            h0_berezinian: (0, kt),
            h1_berezinian: (ct, 1),
        }),
        _ => None,
    };
    let split_table = match ranks {
        [Some(k), Some(c), Some(kt), Some(ct)] if pd.z_o.is_zero() => Some(CohomologyTable {
            h0_structure: (1, 0),
            h1_structure: (c, ct),
            h0_berezinian: (k, kt),
            h1_berezinian: (0, 1),
        }),
        _ => None,
    };
    DualCohomologyReport {
        genus: g,
        n_generators: pd.n_generators(),
        ker_zo,
        coker_zo,
        ker_zo_t,
        coker_zo_t,
        rank_nullity,
        dual_table,
        split_table,
    }
}

/// `a`- and `b`-periods of a holomorphic differential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodVector {
    pub a: Vec<GrassmannScalar>,
    pub b: Vec<GrassmannScalar>,
}

/// Periods of a differential on the dual curve: odd `a` with `Z_oᵗ a = 0`,
/// and `b = Z_eᵗ a`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualPeriodVector {
    a: Vec<GrassmannScalar>,
    b: Vec<GrassmannScalar>,
}

impl DualPeriodVector {
    /// Completes odd `a`-periods to a dual period vector, checking the constraint
    /// `Z_oᵗ a = 0` to absolute tolerance `tol`.
    pub fn from_a_periods(pd: &PeriodData, a: Vec<GrassmannScalar>, tol: f64) -> Result<Self> {
        let g = pd.genus();
        if a.len() != g {
            return Err(Error::Dimension(format!("{} a-periods for genus {g}", a.len())));
        }
        if a.iter().any(|x| !x.is_odd()) {
            return Err(Error::Parity("a-periods of a dual differential must be odd".into()));
        }
        let constraint = pd.z_o.transpose().column_apply(&a);
        let worst = constraint.iter().map(GrassmannScalar::max_abs).fold(0.0, f64::max);
        if worst > tol {
            return Err(Error::Domain(format!("a-periods violate Z_oᵗ a = 0 (residual {worst:e})")));
        }
        let b = pd.z_e.transpose().column_apply(&a);
        Ok(DualPeriodVector { a, b })
    }

    pub fn a(&self) -> &[GrassmannScalar] {
        &self.a
    }

    pub fn b(&self) -> &[GrassmannScalar] {
        &self.b
    }

    pub fn to_period_vector(&self) -> PeriodVector {
        PeriodVector { a: self.a.clone(), b: self.b.clone() }
    }
}

/// `Σᵢ aᵢ(ω) bᵢ(ω̂) − Σᵢ aᵢ(ω̂) bᵢ(ω)`.
pub fn bilinear_residual(omega: &PeriodVector, omega_hat: &PeriodVector) -> Result<GrassmannScalar> {
    let g = omega.a.len();
    if omega.b.len() != g || omega_hat.a.len() != g || omega_hat.b.len() != g {
        return Err(Error::Dimension("period vectors of different genus".into()));
    }
    let n = omega.a.first().map_or(0, GrassmannScalar::n_generators);
    let mut total = GrassmannScalar::zero(n);
    for i in 0..g {
        total += omega.a[i].checked_mul(&omega_hat.b[i])?;
        total -= &omega_hat.a[i].checked_mul(&omega.b[i])?;
    }
    Ok(total)
}

/// Largest coefficient of the bilinear residual over all pairs.
pub fn bilinear_check(omegas: &[PeriodVector], omega_hats: &[PeriodVector]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for w in omegas {
        for h in omega_hats {
            worst = worst.max(bilinear_residual(w, h)?.max_abs());
        }
    }
    Ok(worst)
}

/// `(Z_e − Z_eᵗ) a + Z_o A`.
pub fn pair_relation_check(pd: &PeriodData, a: &[GrassmannScalar], big_a: &[GrassmannScalar]) -> Result<Vec<GrassmannScalar>> {
    let g = pd.genus();
    if a.len() != g || big_a.len() != g - 1 {
        return Err(Error::Dimension(format!("expected {g} a-periods and {} odd coefficients", g - 1)));
    }
    let skew = &pd.z_e - &pd.z_e.transpose();
    let lhs = skew.column_apply(a);
    let rhs = pd.z_o.column_apply(big_a);
    Ok(lhs.iter().zip(&rhs).map(|(x, y)| x + y).collect())
}

/// Basis of solutions `(a, A)` of the pair relation with `a` even and `A`
/// odd, taken from the null space of the expanded map.
pub fn pair_relation_solutions(pd: &PeriodData) -> Vec<(Vec<GrassmannScalar>, Vec<GrassmannScalar>)> {
    let g = pd.genus();
    let n = pd.n_generators();
    let dim = 1usize << n;
    let skew = &pd.z_e - &pd.z_e.transpose();
    let joint = LambdaMatrix::from_fn(n, g, 2 * g - 1, |i, j| if j < g { skew.get(i, j).clone() } else { pd.z_o.get(i, j - g).clone() });
    let full = expansion::column_action(&joint);
    let wanted: Vec<usize> = (0..(2 * g - 1) * dim)
        .filter(|&k| {
            let parity = Parity::of_mask((k % dim) as u32);
            if k / dim < g {
                parity == Parity::Even
            } else {
                parity == Parity::Odd
            }
        })
        .collect();
    let restricted = CMatrix::from_fn(full.nrows(), wanted.len(), |i, j| full[(i, wanted[j])]);
    let basis = linalg::null_space(&restricted, RANK_RTOL);
    (0..basis.ncols())
        .map(|col| {
            let mut flat = vec![Complex64::new(0.0, 0.0); (2 * g - 1) * dim];
            for (r, &k) in wanted.iter().enumerate() {
                flat[k] = basis[(r, col)];
            }
            let v = expansion::unflatten(n, &flat);
            (v[..g].to_vec(), v[g..].to_vec())
        })
        .collect()
}

/// Basis of odd solutions of `Z_oᵗ a = 0`, completed to dual period vectors.
pub fn dual_period_basis(pd: &PeriodData) -> Vec<DualPeriodVector> {
    let g = pd.genus();
    let n = pd.n_generators();
    let dim = 1usize << n;
    let full = expansion::column_action(&pd.z_o.transpose());
    let odd: Vec<usize> = (0..g * dim).filter(|&k| Parity::of_mask((k % dim) as u32) == Parity::Odd).collect();
    let restricted = CMatrix::from_fn(full.nrows(), odd.len(), |i, j| full[(i, odd[j])]);
    let basis = linalg::null_space(&restricted, RANK_RTOL);
    (0..basis.ncols())
        .map(|col| {
            let mut flat = vec![Complex64::new(0.0, 0.0); g * dim];
            for (r, &k) in odd.iter().enumerate() {
                flat[k] = basis[(r, col)];
            }
            let a = expansion::unflatten(n, &flat);
            let b = pd.z_e.transpose().column_apply(&a);
            DualPeriodVector { a, b }
        })
        .collect()
}

/// Periods of the differential with `a`-periods `a` and odd coefficients `A`:
/// `b = Z_e a + Z_o A`.
pub fn periods_from_coefficients(pd: &PeriodData, a: &[GrassmannScalar], big_a: &[GrassmannScalar]) -> PeriodVector {
    let ze_a = pd.z_e.column_apply(a);
    let zo_a = pd.z_o.column_apply(big_a);
    PeriodVector { a: a.to_vec(), b: ze_a.iter().zip(&zo_a).map(|(x, y)| x + y).collect() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProjectednessFlags {
    pub ze_symmetric: bool,
    pub zo_zero: bool,
    pub projected: bool,
}

/// Projected exactly when `Z_e` is symmetric and `Z_o = 0`, both tested
/// coefficient by coefficient without tolerance.
pub fn projectedness_flags(pd: &PeriodData) -> ProjectednessFlags {
    let ze_symmetric = pd.z_e == pd.z_e.transpose();
    let zo_zero = pd.z_o.is_zero();
    ProjectednessFlags { ze_symmetric, zo_zero, projected: ze_symmetric && zo_zero }
}

/// `h⁰ − h¹ = (deg L + 1 − g | deg L + deg N + 1 − g)`.
pub fn riemann_roch(deg_l: i64, g: i64, deg_n: i64) -> (i64, i64) {
    (deg_l + 1 - g, deg_l + deg_n + 1 - g)
}

/// Affine map `(z, η) ↦ (z + z_shift, η + eta_shift)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeShift {
    pub z_shift: Vec<GrassmannScalar>,
    pub eta_shift: Vec<GrassmannScalar>,
}

impl LatticeShift {
    pub fn apply(&self, z: &[GrassmannScalar], eta: &[GrassmannScalar]) -> (Vec<GrassmannScalar>, Vec<GrassmannScalar>) {
        assert_eq!(z.len(), self.z_shift.len());
        assert_eq!(eta.len(), self.eta_shift.len());
        (
            z.iter().zip(&self.z_shift).map(|(x, s)| x + s).collect(),
            eta.iter().zip(&self.eta_shift).map(|(x, s)| x + s).collect(),
        )
    }

    pub fn inverse(&self) -> LatticeShift {
        LatticeShift { z_shift: self.z_shift.iter().map(|x| -x).collect(), eta_shift: self.eta_shift.iter().map(|x| -x).collect() }
    }
}

/// The `2g` generators: unit shifts of `z`, then shifts by row `i` of `Z_e`
/// (on `z`) together with row `i` of `Z_o` (on `η`).
pub fn lattice_generators(pd: &PeriodData) -> Vec<LatticeShift> {
    let g = pd.genus();
    let n = pd.n_generators();
    let mut out = Vec::with_capacity(2 * g);
    for i in 0..g {
        out.push(LatticeShift {
            z_shift: (0..g).map(|j| GrassmannScalar::real(n, if i == j { 1.0 } else { 0.0 })).collect(),
            eta_shift: vec![GrassmannScalar::zero(n); g - 1],
        });
    }
    for i in 0..g {
        out.push(LatticeShift { z_shift: pd.z_e.row(i).to_vec(), eta_shift: pd.z_o.row(i).to_vec() });
    }
    out
}

//! Hilbert-space layouts, elementary operators and tensor embedding.
//!
//! Basis convention: `|0⟩` is the ground state, `σ⁻|1⟩ = |0⟩` and
//! `σᶻ = diag(−1, +1)`. In a tensor product the first subsystem is the most
//! significant digit of the basis index, so `|01⟩` has index 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::matrix::{DenseMatrix, C64, ONE, ZERO};
use crate::numerics::superop::SuperOperator;

/// Single-qubit operator kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
    /// Raising operator `σ⁺ = |1⟩⟨0|`.
    Plus,
    /// Lowering operator `σ⁻ = |0⟩⟨1|`.
    Minus,
}

impl FromStr for Pauli {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Pauli::X),
            "y" => Ok(Pauli::Y),
            "z" => Ok(Pauli::Z),
            "+" | "plus" | "raise" => Ok(Pauli::Plus),
            "-" | "minus" | "lower" => Ok(Pauli::Minus),
            other => Err(Error::InvalidArgument(format!("unknown Pauli kind '{other}'"))),
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::X => "x",
            Pauli::Y => "y",
            Pauli::Z => "z",
            Pauli::Plus => "+",
            Pauli::Minus => "-",
        };
        f.write_str(s)
    }
}

pub fn pauli(kind: Pauli) -> DenseMatrix {
    let i = C64::new(0.0, 1.0);
    let data = match kind {
        Pauli::X => [ZERO, ONE, ONE, ZERO],
        // −i(σ⁺ − σ⁻)
        Pauli::Y => [ZERO, i, -i, ZERO],
        Pauli::Z => [-ONE, ZERO, ZERO, ONE],
        Pauli::Plus => [ZERO, ZERO, ONE, ZERO],
        Pauli::Minus => [ZERO, ONE, ZERO, ZERO],
    };
    DenseMatrix::from_vec(2, 2, data.to_vec()).expect("2x2 literal")
}

/// Truncated boson annihilation operator on `n_max + 1` Fock levels.
pub fn ladder(n_max: usize) -> Result<DenseMatrix> {
    if n_max < 1 {
        return Err(Error::InvalidArgument("boson truncation n_max must be at least 1".into()));
    }
    let d = n_max + 1;
    Ok(DenseMatrix::from_fn(d, d, |r, c| {
        if c == r + 1 {
            C64::new((c as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    }))
}

/// `op` acting on qubit `site` (0-based) of an `n`-qubit register.
pub fn single_site(op: &DenseMatrix, site: usize, n: usize) -> Result<DenseMatrix> {
    if site >= n {
        return Err(Error::InvalidArgument(format!("site {site} outside {n}-qubit register")));
    }
    let left = DenseMatrix::identity(1 << site);
    let right = DenseMatrix::identity(1 << (n - site - 1));
    Ok(left.kron(op).kron(&right))
}

/// Collective operator on `n` qubits: `S± = Σσ±`, `Sᵃ = ½Σσᵃ` otherwise.
pub fn collective(kind: Pauli, n: usize) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("collective operator needs at least one qubit".into()));
    }
    let p = pauli(kind);
    let mut out = DenseMatrix::zeros(1 << n, 1 << n);
    for site in 0..n {
        out += &single_site(&p, site, n)?;
    }
    Ok(match kind {
        Pauli::Plus | Pauli::Minus => out,
        _ => out.scale_real(0.5),
    })
}

/// Ordered subsystem dimensions of one module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpace {
    dims: Vec<usize>,
}

impl ModuleSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("module needs at least one subsystem".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidArgument(format!("subsystem dimension {d} below 2")));
        }
        Ok(Self { dims })
    }

    /// `n` qubits and no ancilla.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    /// `n` qubits followed by one boson mode truncated at `n_max`.
    pub fn qubits_with_boson(n: usize, n_max: usize) -> Result<Self> {
        let mut dims = vec![2; n];
        dims.push(n_max + 1);
        Self::new(dims)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }
}

/// Ordered list of modules; fixes the global tensor order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceLayout {
    modules: Vec<ModuleSpace>,
}

impl SpaceLayout {
    pub fn new(modules: Vec<ModuleSpace>) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::InvalidArgument("layout needs at least one module".into()));
        }
        Ok(Self { modules })
    }

    /// Layout of bare subsystems, one module each.
    pub fn flat(dims: &[usize]) -> Result<Self> {
        Self::new(dims.iter().map(|&d| ModuleSpace::new(vec![d])).collect::<Result<_>>()?)
    }

    pub fn modules(&self) -> &[ModuleSpace] {
        &self.modules
    }

    pub fn subsystem_dims(&self) -> Vec<usize> {
        self.modules.iter().flat_map(|m| m.dims.iter().copied()).collect()
    }

    pub fn num_subsystems(&self) -> usize {
        self.modules.iter().map(ModuleSpace::len).sum()
    }

    pub fn dim(&self) -> usize {
        self.modules.iter().map(ModuleSpace::dim).product()
    }

    /// Global subsystem index of subsystem `local` in module `module`.
    pub fn position(&self, module: usize, local: usize) -> Result<usize> {
        let m = self.modules.get(module).ok_or_else(|| {
            Error::InvalidArgument(format!("module {module} outside layout of {}", self.modules.len()))
        })?;
        if local >= m.len() {
            return Err(Error::InvalidArgument(format!(
                "subsystem {local} outside module {module} of size {}",
                m.len()
            )));
        }
        Ok(self.modules[..module].iter().map(ModuleSpace::len).sum::<usize>() + local)
    }

    /// Global subsystem indices of every subsystem in `module`.
    pub fn module_positions(&self, module: usize) -> Result<Vec<usize>> {
        let len = self
            .modules
            .get(module)
            .ok_or_else(|| Error::InvalidArgument(format!("module {module} outside layout")))?
            .len();
        let start = self.position(module, 0)?;
        Ok((start..start + len).collect())
    }
}

/// Index tables splitting the global basis into a subsystem group and the rest:
/// global index = `group[g] + rest[r]`.
#[derive(Clone, Debug)]
pub struct EmbedTables {
    pub group: Vec<usize>,
    pub rest: Vec<usize>,
    pub dim: usize,
}

impl EmbedTables {
    pub fn new(positions: &[usize], layout: &SpaceLayout) -> Result<Self> {
        let dims = layout.subsystem_dims();
        let n = dims.len();
        let mut seen = vec![false; n];
        for &p in positions {
            if p >= n {
                return Err(Error::InvalidArgument(format!(
                    "subsystem index {p} outside layout of {n} subsystems"
                )));
            }
            if seen[p] {
                return Err(Error::InvalidArgument(format!("subsystem index {p} repeated")));
            }
            seen[p] = true;
        }
        let mut stride = vec![1usize; n];
        for s in (0..n.saturating_sub(1)).rev() {
            stride[s] = stride[s + 1] * dims[s + 1];
        }
        let offsets = |subs: &[usize]| -> Vec<usize> {
            let mut out = vec![0usize];
            for &s in subs {
                let mut next = Vec::with_capacity(out.len() * dims[s]);
                for &o in &out {
                    for k in 0..dims[s] {
                        next.push(o + k * stride[s]);
                    }
                }
                out = next;
            }
            out
        };
        let rest: Vec<usize> = (0..n).filter(|s| !seen[*s]).collect();
        Ok(Self {
            group: offsets(positions),
            rest: offsets(&rest),
            dim: layout.dim(),
        })
    }
}

/// Embeds `op` on the listed subsystems (in the listed order), identity elsewhere.
pub fn embed(op: &DenseMatrix, positions: &[usize], layout: &SpaceLayout) -> Result<DenseMatrix> {
    let t = EmbedTables::new(positions, layout)?;
    if op.shape() != (t.group.len(), t.group.len()) {
        return Err(Error::Dimension(format!(
            "operator is {}x{} but subsystems {positions:?} span dimension {}",
            op.rows(),
            op.cols(),
            t.group.len()
        )));
    }
    let mut out = DenseMatrix::zeros(t.dim, t.dim);
    for (g, &go) in t.group.iter().enumerate() {
        for (h, &ho) in t.group.iter().enumerate() {
            let v = op[(g, h)];
            if v == ZERO {
                continue;
            }
            for &r in &t.rest {
                out[(go + r, ho + r)] = v;
            }
        }
    }
    Ok(out)
}

/// Embeds a superoperator acting on the listed subsystems.
pub fn embed_super(
    sop: &SuperOperator,
    positions: &[usize],
    layout: &SpaceLayout,
) -> Result<SuperOperator> {
    let t = EmbedTables::new(positions, layout)?;
    let dg = t.group.len();
    if sop.dim() != dg {
        return Err(Error::Dimension(format!(
            "superoperator on dimension {} but subsystems {positions:?} span {dg}",
            sop.dim()
        )));
    }
    let d = t.dim;
    let m = sop.matrix();
    let mut out = DenseMatrix::zeros(d * d, d * d);
    for a in 0..dg * dg {
        let (g1, g2) = (a % dg, a / dg);
        for b in 0..dg * dg {
            let v = m[(a, b)];
            if v == ZERO {
                continue;
            }
            let (h1, h2) = (b % dg, b / dg);
            for &r2 in &t.rest {
                let col_row = t.group[g2] + r2;
                let col_col = t.group[h2] + r2;
                for &r1 in &t.rest {
                    let row = t.group[g1] + r1 + d * col_row;
                    let col = t.group[h1] + r1 + d * col_col;
                    out[(row, col)] = v;
                }
            }
        }
    }
    SuperOperator::new(d, out)
}

/// Applies an embedded superoperator to `x` without forming it.
pub fn apply_embedded_super(
    sop: &SuperOperator,
    tables: &EmbedTables,
    x: &DenseMatrix,
) -> Result<DenseMatrix> {
    let dg = tables.group.len();
    if sop.dim() != dg || x.shape() != (tables.dim, tables.dim) {
        return Err(Error::Dimension(format!(
            "embedded application: superoperator on {}, group {dg}, operator {}x{}, space {}",
            sop.dim(),
            x.rows(),
            x.cols(),
            tables.dim
        )));
    }
    let m = sop.matrix();
    let mut out = DenseMatrix::zeros(tables.dim, tables.dim);
    let mut block = vec![ZERO; dg * dg];
    for &r1 in &tables.rest {
        for &r2 in &tables.rest {
            let mut any = false;
            for g2 in 0..dg {
                for g1 in 0..dg {
                    let v = x[(tables.group[g1] + r1, tables.group[g2] + r2)];
                    any |= v != ZERO;
                    block[g1 + dg * g2] = v;
                }
            }
            if !any {
                continue;
            }
            let y = m.matvec(&block);
            for g2 in 0..dg {
                for g1 in 0..dg {
                    out[(tables.group[g1] + r1, tables.group[g2] + r2)] = y[g1 + dg * g2];
                }
            }
        }
    }
    Ok(out)
}

/// Partial trace keeping the listed subsystems, in the listed order.
pub fn partial_trace(x: &DenseMatrix, keep: &[usize], layout: &SpaceLayout) -> Result<DenseMatrix> {
    let t = EmbedTables::new(keep, layout)?;
    if x.shape() != (t.dim, t.dim) {
        return Err(Error::Dimension(format!(
            "partial trace of {}x{} on a space of dimension {}",
            x.rows(),
            x.cols(),
            t.dim
        )));
    }
    let dg = t.group.len();
    Ok(DenseMatrix::from_fn(dg, dg, |a, b| {
        t.rest.iter().map(|&r| x[(t.group[a] + r, t.group[b] + r)]).sum()
    }))
}

/// Orthonormal logical states of a collective-damping module.
#[derive(Clone, Debug)]
pub struct LogicalBasis {
    n_qubits: usize,
    vectors: DenseMatrix,
}

impl LogicalBasis {
    /// Columns are the logical states in the `2^N` physical basis.
    pub fn new(n_qubits: usize, vectors: DenseMatrix) -> Result<Self> {
        if vectors.rows() != 1 << n_qubits {
            return Err(Error::Dimension(format!(
                "logical vectors have {} rows for {n_qubits} qubits",
                vectors.rows()
            )));
        }
        Ok(Self { n_qubits, vectors })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.vectors.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.cols() == 0
    }

    /// Isometry with the logical states as columns.
    pub fn isometry(&self) -> &DenseMatrix {
        &self.vectors
    }

    pub fn state(&self, k: usize) -> Vec<C64> {
        self.vectors.col_vec(k)
    }

    /// Orthogonal projector onto the logical span.
    pub fn projector(&self) -> DenseMatrix {
        self.vectors.matmul(&self.vectors.adjoint())
    }
}

/// Logical basis of the collective-damping DFS for `N ∈ {2, 3}`.
///
/// `N = 2`: `|0̄⟩ = (|01⟩ − |10⟩)/√2`, `|1̄⟩ = |00⟩`.
/// `N = 3`: `|0̄⟩ = (|010⟩ − |100⟩)/√2`, `|1̄⟩ = (|100⟩ + |010⟩ − 2|001⟩)/√6`,
/// `|2̄⟩ = |000⟩`.
pub fn dfs_basis(n: usize) -> Result<LogicalBasis> {
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    let r6 = 1.0 / 6f64.sqrt();
    let cols: Vec<Vec<(usize, f64)>> = match n {
        2 => vec![vec![(0b01, r2), (0b10, -r2)], vec![(0b00, 1.0)]],
        3 => vec![
            vec![(0b010, r2), (0b100, -r2)],
            vec![(0b100, r6), (0b010, r6), (0b001, -2.0 * r6)],
            vec![(0b000, 1.0)],
        ],
        _ => {
            return Err(Error::InvalidArgument(format!(
                "DFS basis available for N = 2 or 3, got {n}"
            )))
        }
    };
    let mut v = DenseMatrix::zeros(1 << n, cols.len());
    for (c, entries) in cols.iter().enumerate() {
        for &(idx, amp) in entries {
            v[(idx, c)] = C64::new(amp, 0.0);
        }
    }
    LogicalBasis::new(n, v)
}

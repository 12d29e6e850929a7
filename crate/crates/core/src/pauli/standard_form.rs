use serde::{Deserialize, Serialize};

use super::operator::{Pauli, PauliOperator};
use crate::error::{Error, Result};

/// Stabilizer generators viewed as the binary block matrix `[H_X | H_Z]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCheckMatrix {
    n: usize,
    rows: Vec<PauliOperator>,
}

impl ParityCheckMatrix {
    pub fn new(n: usize, rows: Vec<PauliOperator>) -> Result<Self> {
        for r in &rows {
            if r.num_qubits() != n {
                return Err(Error::SizeMismatch { left: n, right: r.num_qubits() });
            }
        }
        Ok(Self { n, rows })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[PauliOperator] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<PauliOperator> {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn x_bit(&self, row: usize, col: usize) -> bool {
        self.rows[row].x_mask() >> col & 1 == 1
    }

    pub fn z_bit(&self, row: usize, col: usize) -> bool {
        self.rows[row].z_mask() >> col & 1 == 1
    }

    /// Rows as `2n`-bit vectors (X bits in the low word, Z bits in the high word).
    pub fn binary_rows(&self) -> Vec<(u64, u64)> {
        self.rows.iter().map(|r| (r.x_mask(), r.z_mask())).collect()
    }

    /// GF(2) rank of `[H_X | H_Z]`.
    pub fn rank(&self) -> usize {
        gf2_rank(&self.binary_rows())
    }

    /// GF(2) rank of `H_X` alone.
    pub fn x_rank(&self) -> usize {
        gf2_rank(&self.rows.iter().map(|r| (r.x_mask(), 0)).collect::<Vec<_>>())
    }

    /// First pair of anticommuting rows, if any.
    pub fn first_anticommuting_pair(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows.len() {
            for j in i + 1..self.rows.len() {
                if !self.rows[i].commutes_unchecked(&self.rows[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// First row that lies in the span of the rows before it.
    pub fn first_dependent_row(&self) -> Option<usize> {
        let bin = self.binary_rows();
        (0..bin.len()).find(|&i| gf2_rank(&bin[..=i]) <= i)
    }

    /// Whether `p` (ignoring phase) lies in the GF(2) row space.
    pub fn spans(&self, p: &PauliOperator) -> bool {
        let mut bin = self.binary_rows();
        let base = gf2_rank(&bin);
        bin.push((p.x_mask(), p.z_mask()));
        gf2_rank(&bin) == base
    }

    /// Reorders qubits of every row (see [`PauliOperator::permuted`]).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self { n: self.n, rows: self.rows.iter().map(|r| r.permuted(perm)).collect() }
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let mut perm: Vec<usize> = (0..self.n).collect();
        perm.swap(a, b);
        for r in &mut self.rows {
            *r = r.permuted(&perm);
        }
    }
}

/// Rank over GF(2) of rows given as `(x, z)` word pairs.
pub(crate) fn gf2_rank(rows: &[(u64, u64)]) -> usize {
    let mut basis: Vec<(u64, u64)> = Vec::new();
    for &(mut x, mut z) in rows {
        for &(bx, bz) in &basis {
            let (px, pz) = leading(bx, bz);
            if (px != 0 && x & px != 0) || (px == 0 && z & pz != 0) {
                x ^= bx;
                z ^= bz;
            }
        }
        if x != 0 || z != 0 {
            basis.push((x, z));
        }
    }
    basis.len()
}

fn leading(x: u64, z: u64) -> (u64, u64) {
    if x != 0 {
        (x & x.wrapping_neg(), 0)
    } else {
        (0, z & z.wrapping_neg())
    }
}

/// One elementary row operation, in the order it was applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowOp {
    Swap(usize, usize),
    /// `rows[target] <- rows[source] · rows[target]`
    Multiply {
        target: usize,
        source: usize,
    },
}

/// Output of [`standard_form`]. Everything except `qubit_permutation` lives in
/// the permuted qubit frame, where qubit `q` is input qubit
/// `qubit_permutation[q]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardFormResult {
    pub matrix: ParityCheckMatrix,
    pub qubit_permutation: Vec<usize>,
    pub rank_r: usize,
    pub logical_x: Vec<PauliOperator>,
    pub logical_z: Vec<PauliOperator>,
    pub destabilizers: Vec<PauliOperator>,
    pub row_ops: Vec<RowOp>,
}

impl StandardFormResult {
    pub fn num_logical(&self) -> usize {
        self.logical_x.len()
    }

    /// Inverse of `qubit_permutation`: input qubit `q` sits at column `inverse[q]`.
    pub fn inverse_permutation(&self) -> Vec<usize> {
        let mut inv = vec![0; self.qubit_permutation.len()];
        for (new, &old) in self.qubit_permutation.iter().enumerate() {
            inv[old] = new;
        }
        inv
    }

    /// Maps an operator from the permuted frame back to input qubit order.
    pub fn unpermute(&self, p: &PauliOperator) -> PauliOperator {
        p.permuted(&self.inverse_permutation())
    }

    /// Checks the `[I A1 A2 | B 0 C; 0 0 0 | D I E]` layout bit-exactly.
    pub fn block_structure_holds(&self) -> bool {
        let n = self.matrix.num_qubits();
        let m = self.matrix.len();
        let r = self.rank_r;
        for i in 0..m {
            for c in 0..n {
                let x = self.matrix.x_bit(i, c);
                let z = self.matrix.z_bit(i, c);
                if i < r {
                    if c < r && x != (c == i) {
                        return false;
                    }
                    if (r..m).contains(&c) && z {
                        return false;
                    }
                } else {
                    if x {
                        return false;
                    }
                    if (r..m).contains(&c) && z != (c == i) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Replays `row_ops` on `input` permuted by `qubit_permutation`.
    pub fn replay(&self, input: &ParityCheckMatrix) -> ParityCheckMatrix {
        let mut rows = input.permuted(&self.qubit_permutation).into_rows();
        for op in &self.row_ops {
            match *op {
                RowOp::Swap(a, b) => rows.swap(a, b),
                RowOp::Multiply { target, source } => {
                    rows[target] = rows[source].mul_unchecked(&rows[target]);
                }
            }
        }
        ParityCheckMatrix { n: input.n, rows }
    }
}

/// Gaussian elimination with qubit permutation into standard form.
///
/// Pivots take the leftmost available column; a column swap happens only when
/// the pivot column differs from the diagonal position. Row products are exact
/// Pauli products, so generator signs are carried through.
pub fn standard_form(h: &ParityCheckMatrix) -> Result<StandardFormResult> {
    if let Some((i, j)) = h.first_anticommuting_pair() {
        return Err(Error::NonCommuting { first: i, second: j });
    }
    if let Some(i) = h.first_dependent_row() {
        return Err(Error::DependentGenerators(i));
    }
    let n = h.num_qubits();
    let m = h.len();
    if m > n {
        return Err(Error::DependentGenerators(n));
    }
    let mut work = h.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut ops = Vec::new();

    let swap_rows = |work: &mut ParityCheckMatrix, ops: &mut Vec<RowOp>, a: usize, b: usize| {
        if a != b {
            work.rows.swap(a, b);
            ops.push(RowOp::Swap(a, b));
        }
    };
    let swap_cols = |work: &mut ParityCheckMatrix, perm: &mut Vec<usize>, a: usize, b: usize| {
        if a != b {
            work.swap_columns(a, b);
            perm.swap(a, b);
        }
    };
    let add_row = |work: &mut ParityCheckMatrix, ops: &mut Vec<RowOp>, target: usize, source: usize| {
        work.rows[target] = work.rows[source].mul_unchecked(&work.rows[target]);
        ops.push(RowOp::Multiply { target, source });
    };

    // X block.
    let mut r = 0;
    while r < m {
        let Some((row, col)) = (r..n).find_map(|c| (r..m).find(|&i| work.x_bit(i, c)).map(|i| (i, c))) else {
            break;
        };
        swap_rows(&mut work, &mut ops, r, row);
        swap_cols(&mut work, &mut perm, r, col);
        for i in 0..m {
            if i != r && work.x_bit(i, r) {
                add_row(&mut work, &mut ops, i, r);
            }
        }
        r += 1;
    }

    // Z block of the remaining rows, pivots in columns r..m.
    for p in r..m {
        let Some((row, col)) = (p..n).find_map(|c| (p..m).find(|&i| work.z_bit(i, c)).map(|i| (i, c))) else {
            // A row with no X part and no Z outside the first r columns would
            // anticommute with the X-block rows; independence was checked above.
            return Err(Error::DependentGenerators(p));
        };
        swap_rows(&mut work, &mut ops, p, row);
        swap_cols(&mut work, &mut perm, p, col);
        for i in 0..m {
            if i != p && work.z_bit(i, p) {
                add_row(&mut work, &mut ops, i, p);
            }
        }
    }

    let k = n - m;
    let bit = |v: u64, c: usize| v >> c & 1 == 1;
    let mut logical_x = Vec::with_capacity(k);
    let mut logical_z = Vec::with_capacity(k);
    for j in 0..k {
        let lc = m + j;
        // L_X = [0 E^T I | C^T 0 0]: E is the lower rows' Z part on the last k
        // columns, C the upper rows' Z part there.
        let mut lx = PauliOperator::single(n, lc, Pauli::X);
        let mut lz = PauliOperator::single(n, lc, Pauli::Z);
        for i in r..m {
            if bit(work.rows[i].z_mask(), lc) {
                lx = lx.mul_unchecked(&PauliOperator::single(n, i, Pauli::X));
            }
        }
        for i in 0..r {
            if bit(work.rows[i].z_mask(), lc) {
                lx = lx.mul_unchecked(&PauliOperator::single(n, i, Pauli::Z));
            }
            // L_Z = [0 0 0 | A2^T 0 I]
            if bit(work.rows[i].x_mask(), lc) {
                lz = lz.mul_unchecked(&PauliOperator::single(n, i, Pauli::Z));
            }
        }
        logical_x.push(lx.unsigned());
        logical_z.push(lz.unsigned());
    }

    let destabilizers = (0..m).map(|i| PauliOperator::single(n, i, if i < r { Pauli::Z } else { Pauli::X })).collect();

    Ok(StandardFormResult {
        matrix: work,
        qubit_permutation: perm,
        rank_r: r,
        logical_x,
        logical_z,
        destabilizers,
        row_ops: ops,
    })
}

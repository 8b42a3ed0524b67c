//! Packed GF(2) row arithmetic shared by the code constructions.
//!
//! Rows are stored as little runs of `u64` words, bit `j` of a row living in
//! word `j / 64` at bit `j % 64`.

/// Words needed for `n` bits.
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

pub fn get_bit(row: &[u64], j: usize) -> u8 {
    ((row[j / 64] >> (j % 64)) & 1) as u8
}

pub fn set_bit(row: &mut [u64], j: usize) {
    row[j / 64] |= 1u64 << (j % 64);
}

pub fn xor_rows(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

pub fn pack_bits(bits: &[u8]) -> Vec<u64> {
    let mut row = vec![0u64; words_for(bits.len())];
    for (j, &b) in bits.iter().enumerate() {
        if b != 0 {
            set_bit(&mut row, j);
        }
    }
    row
}

pub fn unpack_bits(row: &[u64], n: usize) -> Vec<u8> {
    (0..n).map(|j| get_bit(row, j)).collect()
}

/// Parity of the AND of two packed rows, i.e. their GF(2) inner product.
pub fn dot(a: &[u64], b: &[u64]) -> u8 {
    let mut acc = 0u64;
    for (x, y) in a.iter().zip(b) {
        acc ^= x & y;
    }
    (acc.count_ones() & 1) as u8
}

/// Rank of a packed row-major matrix over GF(2). Destroys its copy of `rows`.
pub fn rank(rows: &[Vec<u64>], n: usize) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..m.len()).find(|&r| get_bit(&m[r], col) == 1) else {
            continue;
        };
        m.swap(rank, pivot);
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && get_bit(row, col) == 1 {
                xor_rows(row, &pivot_row);
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Basis of the null space { x : M xᵀ = 0 } of a packed row-major matrix
/// with `n` columns. Returns packed rows of length `n`.
pub fn null_space(rows: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    // Reduced row echelon form, tracking pivot columns.
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(pivot) = (r..m.len()).find(|&i| get_bit(&m[i], col) == 1) else {
            continue;
        };
        m.swap(r, pivot);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && get_bit(row, col) == 1 {
                xor_rows(row, &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let words = words_for(n);
    let mut basis = Vec::with_capacity(n - pivots.len());
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; words];
        set_bit(&mut v, free);
        // Back-substitute: pivot variable of row i equals the free column's
        // coefficient in that row.
        for (i, &p) in pivots.iter().enumerate() {
            if get_bit(&m[i], free) == 1 {
                set_bit(&mut v, p);
            }
        }
        basis.push(v);
    }
    basis
}

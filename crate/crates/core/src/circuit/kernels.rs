//! In-place gate kernels on row-major `2ⁿ × 2ⁿ` buffers.

use num_complex::Complex64;

pub(crate) type Gate2 = [[Complex64; 2]; 2];

#[inline]
fn mask(qubits: usize, qubit: usize) -> usize {
    1 << (qubits - 1 - qubit)
}

pub(crate) fn dagger(g: &Gate2) -> Gate2 {
    [[g[0][0].conj(), g[1][0].conj()], [g[0][1].conj(), g[1][1].conj()]]
}

/// `X ← G X` with `G` acting on `qubit`.
pub(crate) fn left_1q(buf: &mut [Complex64], qubits: usize, qubit: usize, g: &Gate2) {
    let d = 1 << qubits;
    let m = mask(qubits, qubit);
    for r0 in (0..d).filter(|r| r & m == 0) {
        let r1 = r0 | m;
        let (lo, hi) = buf.split_at_mut(r1 * d);
        let row0 = &mut lo[r0 * d..(r0 + 1) * d];
        let row1 = &mut hi[..d];
        for (a, b) in row0.iter_mut().zip(row1.iter_mut()) {
            let (x0, x1) = (*a, *b);
            *a = g[0][0] * x0 + g[0][1] * x1;
            *b = g[1][0] * x0 + g[1][1] * x1;
        }
    }
}

/// `X ← X G†` with `G` acting on `qubit`.
pub(crate) fn right_1q_adjoint(buf: &mut [Complex64], qubits: usize, qubit: usize, g: &Gate2) {
    let d = 1 << qubits;
    let m = mask(qubits, qubit);
    let (c00, c01, c10, c11) = (g[0][0].conj(), g[0][1].conj(), g[1][0].conj(), g[1][1].conj());
    for row in buf.chunks_exact_mut(d) {
        for k0 in (0..d).filter(|c| c & m == 0) {
            let k1 = k0 | m;
            let (x0, x1) = (row[k0], row[k1]);
            row[k0] = x0 * c00 + x1 * c01;
            row[k1] = x0 * c10 + x1 * c11;
        }
    }
}

/// `X ← G X G†`.
pub(crate) fn conjugate_1q(buf: &mut [Complex64], qubits: usize, qubit: usize, g: &Gate2) {
    left_1q(buf, qubits, qubit, g);
    right_1q_adjoint(buf, qubits, qubit, g);
}

#[inline]
fn cnot_map(index: usize, control_mask: usize, target_mask: usize) -> usize {
    if index & control_mask != 0 {
        index ^ target_mask
    } else {
        index
    }
}

/// `X ← CNOT · X`.
pub(crate) fn left_cnot(buf: &mut [Complex64], qubits: usize, control: usize, target: usize) {
    let d = 1 << qubits;
    let (cm, tm) = (mask(qubits, control), mask(qubits, target));
    for r in 0..d {
        let p = cnot_map(r, cm, tm);
        if p > r {
            for c in 0..d {
                buf.swap(r * d + c, p * d + c);
            }
        }
    }
}

/// `X ← CNOT · X · CNOT`.
pub(crate) fn conjugate_cnot(buf: &mut [Complex64], qubits: usize, control: usize, target: usize) {
    left_cnot(buf, qubits, control, target);
    let d = 1 << qubits;
    let (cm, tm) = (mask(qubits, control), mask(qubits, target));
    for row in buf.chunks_exact_mut(d) {
        for c in 0..d {
            let p = cnot_map(c, cm, tm);
            if p > c {
                row.swap(c, p);
            }
        }
    }
}

/// `K = Tr_{others}(O ρ)` on `qubit`, for Hermitian `ρ`.
pub(crate) fn reduced_product(o: &[Complex64], rho: &[Complex64], qubits: usize, qubit: usize) -> Gate2 {
    let d = 1 << qubits;
    let m = mask(qubits, qubit);
    let zero = Complex64::new(0.0, 0.0);
    let mut k = [[zero; 2]; 2];
    for x0 in (0..d).filter(|x| x & m == 0) {
        let rows = [x0, x0 | m];
        for p in 0..2 {
            let o_row = &o[rows[p] * d..(rows[p] + 1) * d];
            for q in 0..2 {
                // (Oρ)_{xp,xq} = Σ_c O[xp][c] ρ[c][xq] = Σ_c O[xp][c] conj(ρ[xq][c])
                let r_row = &rho[rows[q] * d..(rows[q] + 1) * d];
                k[p][q] += o_row.iter().zip(r_row).map(|(a, b)| a * b.conj()).sum::<Complex64>();
            }
        }
    }
    k
}

pub(crate) fn mul2(a: &Gate2, b: &Gate2) -> Gate2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

//! In-place strided gate kernels over dense amplitude vectors.
//!
//! Kernels never materialize the full-register matrix of a gate. The outer
//! loop walks the mixed-radix odometer of all sites outside the gate's
//! support (control sites are pinned to their required values), and the inner
//! loop applies the gate block to the gathered amplitude group. Exact zeros
//! of the gate matrix are skipped, so permutation and mostly-identity blocks
//! cost what their nonzero structure costs.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

use super::{GateOp, SiteRegister};

/// Offsets of the gate's target block within the full index space, indexed
/// by the block row, plus the odometer over the remaining sites.
struct GateLayout {
    block_offsets: Vec<usize>,
    outer_dims: Vec<usize>,
    outer_strides: Vec<usize>,
    base0: usize,
}

fn layout(register: &SiteRegister, gate: &GateOp) -> Result<GateLayout> {
    let targets = gate.targets();
    let controls = gate.controls();
    for &s in targets {
        if s >= register.num_sites() {
            return Err(Error::GateShape(format!(
                "target site {s} out of range for {}-site register",
                register.num_sites()
            )));
        }
    }
    let mut block_dim = 1usize;
    for &s in targets {
        block_dim *= register.dim(s);
    }
    if block_dim != gate.dim() {
        return Err(Error::GateShape(format!(
            "gate matrix dimension {} does not match target block dimension {}",
            gate.dim(),
            block_dim
        )));
    }
    let mut base0 = 0usize;
    for c in controls {
        if c.site >= register.num_sites() {
            return Err(Error::GateShape(format!(
                "control site {} out of range",
                c.site
            )));
        }
        if c.value >= register.dim(c.site) {
            return Err(Error::InvalidBasisIndex {
                site: c.site,
                digit: c.value,
                dim: register.dim(c.site),
            });
        }
        base0 += c.value * register.stride(c.site);
    }

    // Offset of block row r: decode r mixed-radix over the target dims.
    let mut block_offsets = vec![0usize; block_dim];
    for (r, off) in block_offsets.iter_mut().enumerate() {
        let mut rem = r;
        for &s in targets.iter().rev() {
            let d = register.dim(s);
            *off += (rem % d) * register.stride(s);
            rem /= d;
        }
    }

    let mut in_support = vec![false; register.num_sites()];
    for &s in targets {
        in_support[s] = true;
    }
    for c in controls {
        in_support[c.site] = true;
    }
    let mut outer_dims = Vec::new();
    let mut outer_strides = Vec::new();
    for s in 0..register.num_sites() {
        if !in_support[s] {
            outer_dims.push(register.dim(s));
            outer_strides.push(register.stride(s));
        }
    }
    Ok(GateLayout {
        block_offsets,
        outer_dims,
        outer_strides,
        base0,
    })
}

/// Walk every group base index (controls pinned, targets at digit 0).
fn for_each_base(layout: &GateLayout, mut f: impl FnMut(usize)) {
    let n = layout.outer_dims.len();
    let mut digits = vec![0usize; n];
    let mut base = layout.base0;
    loop {
        f(base);
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            digits[k] += 1;
            base += layout.outer_strides[k];
            if digits[k] < layout.outer_dims[k] {
                break;
            }
            base -= layout.outer_dims[k] * layout.outer_strides[k];
            digits[k] = 0;
        }
    }
}

pub(super) fn apply_gate(
    register: &SiteRegister,
    amps: &mut [Complex64],
    gate: &GateOp,
) -> Result<()> {
    let lay = layout(register, gate)?;
    let u = gate.unitary();
    let block = gate.dim();

    // Classify the matrix structure. Rows/columns that are exact identity
    // rows are skipped entirely; product-formula gates on projector-rich
    // terms are identity on most of their block.
    let mut diagonal = true;
    let mut active = vec![false; block];
    for r in 0..block {
        for c in 0..block {
            let v = u[(r, c)];
            if v == Complex64::ZERO {
                continue;
            }
            if r != c {
                diagonal = false;
                active[r] = true;
                active[c] = true;
            } else if v != Complex64::ONE {
                active[r] = true;
            }
        }
    }

    if diagonal {
        // Only non-unit diagonal entries do work.
        let dlist: Vec<(usize, Complex64)> = (0..block)
            .filter(|&r| active[r])
            .map(|r| (lay.block_offsets[r], u[(r, r)]))
            .collect();
        if dlist.is_empty() {
            return Ok(());
        }
        for_each_base(&lay, |base| {
            for &(off, v) in &dlist {
                debug_assert!(base + off < amps.len());
                unsafe {
                    *amps.get_unchecked_mut(base + off) *= v;
                }
            }
        });
        return Ok(());
    }

    // Compressed rows over the active sub-block. Every nonzero of an active
    // row sits in an active column: inactive columns are exact identity
    // columns of a unitary matrix.
    let act: Vec<usize> = (0..block).filter(|&r| active[r]).collect();
    let k = act.len();
    if k == 0 {
        return Ok(());
    }
    let mut col_pos = vec![usize::MAX; block];
    for (p, &r) in act.iter().enumerate() {
        col_pos[r] = p;
    }
    let aoffs: Vec<usize> = act.iter().map(|&r| lay.block_offsets[r]).collect();
    let mut row_ptr = Vec::with_capacity(k + 1);
    let mut cols: Vec<(u32, Complex64)> = Vec::new();
    row_ptr.push(0usize);
    for &r in &act {
        for c in 0..block {
            let v = u[(r, c)];
            if v != Complex64::ZERO {
                debug_assert_ne!(col_pos[c], usize::MAX);
                cols.push((col_pos[c] as u32, v));
            }
        }
        row_ptr.push(cols.len());
    }

    let mut x = vec![Complex64::ZERO; k];
    for_each_base(&lay, |base| {
        for (p, &off) in aoffs.iter().enumerate() {
            debug_assert!(base + off < amps.len());
            unsafe {
                *x.get_unchecked_mut(p) = *amps.get_unchecked(base + off);
            }
        }
        for p in 0..k {
            let mut acc = Complex64::ZERO;
            for &(c, v) in &cols[row_ptr[p]..row_ptr[p + 1]] {
                acc += v * unsafe { *x.get_unchecked(c as usize) };
            }
            unsafe {
                *amps.get_unchecked_mut(base + aoffs[p]) = acc;
            }
        }
    });
    Ok(())
}

fn validate_blocks(
    register: &SiteRegister,
    control_site: usize,
    blocks: &[Vec<usize>],
) -> Result<()> {
    if control_site >= register.num_sites() || register.dim(control_site) != 2 {
        return Err(Error::BlockShape(format!(
            "control site {control_site} must be a qubit site of the register"
        )));
    }
    if blocks.is_empty() {
        return Err(Error::BlockShape("no blocks given".into()));
    }
    let profile: Vec<usize> = blocks[0].iter().map(|&s| register.dim(s)).collect();
    let mut seen = vec![false; register.num_sites()];
    seen[control_site] = true;
    for block in blocks {
        if block.len() != blocks[0].len() {
            return Err(Error::BlockShape("blocks have different lengths".into()));
        }
        for (&s, &d) in block.iter().zip(&profile) {
            if s >= register.num_sites() {
                return Err(Error::BlockShape(format!("block site {s} out of range")));
            }
            if register.dim(s) != d {
                return Err(Error::BlockShape(format!(
                    "block site {s} has local dim {}, expected {d}",
                    register.dim(s)
                )));
            }
            if seen[s] {
                return Err(Error::BlockShape(format!(
                    "site {s} appears in more than one block or as control"
                )));
            }
            seen[s] = true;
        }
    }
    Ok(())
}

/// Destination index of `idx` under the cyclic block permutation.
pub(super) fn cycle_destination(
    register: &SiteRegister,
    blocks: &[Vec<usize>],
    idx: usize,
) -> usize {
    let q = blocks.len();
    let mut dst = idx;
    for k in 0..q {
        let next = &blocks[(k + 1) % q];
        for (p, &s) in blocks[k].iter().enumerate() {
            let digit = register.digit_at(idx, s);
            dst = dst + digit * register.stride(next[p]) - digit * register.stride(s);
        }
    }
    dst
}

pub(super) fn apply_block_cycle(
    register: &SiteRegister,
    amps: &mut [Complex64],
    control_site: usize,
    blocks: &[Vec<usize>],
) -> Result<()> {
    validate_blocks(register, control_site, blocks)?;
    if blocks.len() == 1 {
        return Ok(());
    }
    let cstride = register.stride(control_site);
    let mut out = amps.to_vec();
    for (idx, &a) in amps.iter().enumerate() {
        if (idx / cstride) % 2 == 1 {
            out[cycle_destination(register, blocks, idx)] = a;
        }
    }
    amps.copy_from_slice(&out);
    Ok(())
}

/// Gate decomposition of the Fourier transform on qubit sites, most
/// significant site first: Hadamard plus controlled phases per site, then the
/// bit-reversal swaps.
pub(crate) fn qft_gate_sequence(
    register: &SiteRegister,
    sites: &[usize],
) -> Result<Vec<GateOp>> {
    register.check_sites(sites)?;
    for &s in sites {
        if register.dim(s) != 2 {
            return Err(Error::GateShape(format!(
                "Fourier transform site {s} has local dim {}, expected a qubit",
                register.dim(s)
            )));
        }
    }
    let m = sites.len();
    let mut gates = Vec::new();
    for a in 0..m {
        gates.push(GateOp::hadamard(sites[a]));
        for b in (a + 1)..m {
            let k = (b - a + 1) as u32;
            gates.push(GateOp::fourier_phase(sites[a], k).controlled(sites[b], 1)?);
        }
    }
    for a in 0..m / 2 {
        gates.push(GateOp::swap(sites[a], sites[m - 1 - a], 2)?);
    }
    Ok(gates)
}

/// Reference embedding of a gate as its explicit full-register matrix.
///
/// Built directly from the definition (identity outside the target block,
/// controls selecting basis columns), independently of the strided kernels;
/// intended as a validation oracle for registers of modest dimension.
pub fn embed_full_matrix(register: &SiteRegister, gate: &GateOp) -> Result<DMatrix<Complex64>> {
    let n = register.total_dim();
    if n > 1 << 12 {
        return Err(Error::SizeCap {
            dim: n,
            cap: 1 << 12,
        });
    }
    let u = gate.unitary();
    let targets = gate.targets();
    let mut full = DMatrix::<Complex64>::zeros(n, n);
    for col in 0..n {
        let active = gate
            .controls()
            .iter()
            .all(|c| register.digit_at(col, c.site) == c.value);
        if !active {
            full[(col, col)] = Complex64::ONE;
            continue;
        }
        // Column digits on the target block.
        let mut c_block = 0usize;
        for &s in targets {
            c_block = c_block * register.dim(s) + register.digit_at(col, s);
        }
        // Base index with target digits zeroed.
        let mut base = col;
        for &s in targets {
            base -= register.digit_at(col, s) * register.stride(s);
        }
        for r_block in 0..u.nrows() {
            let v = u[(r_block, c_block)];
            if v == Complex64::ZERO {
                continue;
            }
            let mut row = base;
            let mut rem = r_block;
            for &s in targets.iter().rev() {
                let d = register.dim(s);
                row += (rem % d) * register.stride(s);
                rem /= d;
            }
            full[(row, col)] = v;
        }
    }
    Ok(full)
}

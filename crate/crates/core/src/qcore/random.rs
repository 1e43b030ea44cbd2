//! Seeded generators for test instances. Every function is deterministic in
//! its seed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::matrix::ComplexMatrix;
use super::state::{DensityMatrix, UnitaryMatrix};
use crate::error::{Error, Result};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gaussian_matrix(dim: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |_, _| gaussian(rng))
}

/// Haar-random unitary: QR of a complex Ginibre matrix, with the phases of
/// R's diagonal folded back into Q.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> UnitaryMatrix {
    let qr = gaussian_matrix(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..dim {
            q[(row, k)] *= phase;
        }
    }
    UnitaryMatrix::new_unchecked(ComplexMatrix::from_nalgebra(q).expect("QR output is finite"))
}

pub fn random_unitary(dim: usize, seed: u64) -> UnitaryMatrix {
    haar_unitary(dim, &mut rng(seed))
}

/// Haar-random pure state amplitudes.
pub fn haar_state(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Mixture of `rank` orthonormal Haar-random pure states with flat-Dirichlet
/// weights.
pub fn density_with(dim: usize, rank: usize, rng: &mut impl Rng) -> Result<DensityMatrix> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidParameter(format!(
            "rank {rank} outside 1..={dim}"
        )));
    }
    let basis = haar_unitary(dim, rng);
    let mut weights: Vec<f64> = (0..rank)
        .map(|_| rng.sample::<f64, _>(Exp1) + 1e-3)
        .collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let u = basis.matrix();
    let m = ComplexMatrix::from_fn(dim, |r, c| {
        weights
            .iter()
            .enumerate()
            .map(|(k, w)| u.get(r, k) * u.get(c, k).conj() * *w)
            .sum()
    });
    let herm = m.add(&m.adjoint())?.scale(0.5);
    Ok(DensityMatrix::new_unchecked(herm))
}

pub fn random_density(dim: usize, seed: u64, rank: usize) -> Result<DensityMatrix> {
    density_with(dim, rank, &mut rng(seed))
}

pub fn random_permutation(dim: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..dim).collect();
    p.shuffle(rng);
    p
}

/// `exp(i delta H)` for a Gaussian Hermitian `H` supported on `groups x groups`
/// blocks and scaled to max-entry modulus 1.
fn hermitian_step(
    dim: usize,
    delta: f64,
    groups: &[Vec<usize>],
    rng: &mut impl Rng,
) -> DMatrix<Complex64> {
    let g = gaussian_matrix(dim, rng);
    let mut h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let mut group_of = vec![usize::MAX; dim];
    for (k, grp) in groups.iter().enumerate() {
        for &i in grp {
            group_of[i] = k;
        }
    }
    for r in 0..dim {
        for c in 0..dim {
            if group_of[r] != group_of[c] {
                h[(r, c)] = Complex64::new(0.0, 0.0);
            }
        }
    }
    let max = h.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if max > 0.0 {
        h /= Complex64::new(max, 0.0);
    }
    let eig = h.symmetric_eigen();
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|lambda| Complex64::new(0.0, delta * lambda).exp()),
    );
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// `U exp(i delta H)` with `H` a random Hermitian of max-entry modulus 1.
pub fn perturb_unitary(u: &UnitaryMatrix, delta: f64, seed: u64) -> UnitaryMatrix {
    let all: Vec<usize> = (0..u.dim()).collect();
    perturb_unitary_within(u, delta, seed, &[all])
}

/// Like [`perturb_unitary`] but the generator only mixes basis states inside
/// each of `input_groups`. Passing the input sets of the minimal blocks keeps
/// the block structure of `U`.
pub fn perturb_unitary_within(
    u: &UnitaryMatrix,
    delta: f64,
    seed: u64,
    input_groups: &[Vec<usize>],
) -> UnitaryMatrix {
    if delta == 0.0 {
        return u.clone();
    }
    let step = hermitian_step(u.dim(), delta, input_groups, &mut rng(seed));
    let m = u.matrix().as_nalgebra() * step;
    UnitaryMatrix::new_unchecked(ComplexMatrix::from_nalgebra(m).expect("finite"))
}

/// Input and output indices of one constructed block.
pub type BlockIndices = (Vec<usize>, Vec<usize>);

/// Direct sum of Haar blocks of the given sizes, with rows and columns
/// relabeled by independent random permutations. Returns the unitary and the
/// constructed `(inputs, outputs)` pairs, each sorted.
pub fn random_block_unitary(
    sizes: &[usize],
    rng: &mut impl Rng,
) -> (UnitaryMatrix, Vec<BlockIndices>) {
    let dim: usize = sizes.iter().sum();
    let mut direct = DMatrix::<Complex64>::zeros(dim, dim);
    let mut offset = 0;
    for &s in sizes {
        let block = haar_unitary(s, rng);
        for r in 0..s {
            for c in 0..s {
                direct[(offset + r, offset + c)] = block.matrix().get(r, c);
            }
        }
        offset += s;
    }
    let row_perm = random_permutation(dim, rng);
    let col_perm = random_permutation(dim, rng);
    // Entry (row_perm[r], col_perm[c]) of the result is direct(r, c).
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            out[(row_perm[r], col_perm[c])] = direct[(r, c)];
        }
    }
    let mut blocks = Vec::new();
    let mut offset = 0;
    for &s in sizes {
        let mut inputs: Vec<usize> = (offset..offset + s).map(|c| col_perm[c]).collect();
        let mut outputs: Vec<usize> = (offset..offset + s).map(|r| row_perm[r]).collect();
        inputs.sort_unstable();
        outputs.sort_unstable();
        blocks.push((inputs, outputs));
        offset += s;
    }
    blocks.sort();
    (
        UnitaryMatrix::new_unchecked(ComplexMatrix::from_nalgebra(out).expect("finite")),
        blocks,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::state::validate_unitary;

    #[test]
    fn one_dimensional_unitary_is_a_phase() {
        let u = random_unitary(1, 3);
        assert!((u.matrix().get(0, 0).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unitary_is_deterministic_and_valid() {
        assert_eq!(random_unitary(4, 11), random_unitary(4, 11));
        assert_ne!(random_unitary(4, 11), random_unitary(4, 12));
        for seed in 0..20 {
            assert!(validate_unitary(random_unitary(4, seed).matrix(), 1e-10));
        }
    }

    #[test]
    fn pure_random_density_is_idempotent() {
        let rho = random_density(4, 5, 1).unwrap();
        assert!(rho.purity_defect() < 1e-9);
        assert_eq!(rho, random_density(4, 5, 1).unwrap());
    }

    #[test]
    fn full_rank_density_is_valid() {
        let rho = random_density(5, 9, 5).unwrap();
        DensityMatrix::new(rho.matrix().clone(), 1e-10).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(random_density(3, 1, 0).is_err());
        assert!(random_density(3, 1, 4).is_err());
    }

    #[test]
    fn zero_perturbation_is_identity_map() {
        let u = random_unitary(3, 2);
        assert_eq!(perturb_unitary(&u, 0.0, 1), u);
    }

    #[test]
    fn small_perturbation_is_small_and_unitary() {
        let u = random_unitary(2, 2);
        let v = perturb_unitary(&u, 1e-3, 8);
        assert!(u.matrix().max_abs_diff(v.matrix()) <= 3e-3);
        assert!(validate_unitary(
            perturb_unitary(&u, 0.1, 8).matrix(),
            1e-10
        ));
    }

    #[test]
    fn block_unitary_is_unitary() {
        let (u, blocks) = random_block_unitary(&[2, 1, 3], &mut rng(4));
        assert!(validate_unitary(u.matrix(), 1e-10));
        assert_eq!(blocks.len(), 3);
    }
}

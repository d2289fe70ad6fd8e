//! Fermionic ladder operators, their action on occupation bitstrings, and the
//! Jordan–Wigner mapping to Pauli sums.
//!
//! Spin orbital `2p + σ` (σ = 0 for α, 1 for β) is qubit `2p + σ`. A creation
//! operator picks up `(-1)^{#occupied modes below it}`, matching
//! `a†_p = ½(X_p − iY_p) Z_{p-1}…Z_0`.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use super::pauli::{PauliString, PauliSum};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            mode,
            dagger: false,
        }
    }
}

#[inline]
pub fn spin_orbital(spatial: usize, spin: usize) -> usize {
    2 * spatial + spin
}

/// Applies a product of ladder operators (rightmost acts first) to an
/// occupation bitstring. Returns `None` when the result vanishes.
#[inline]
pub fn apply_ladders(ops: &[Ladder], mut b: u64) -> Option<(f64, u64)> {
    let mut sign = 1.0;
    for op in ops.iter().rev() {
        let bit = 1u64 << op.mode;
        let occupied = b & bit != 0;
        if occupied == op.dagger {
            return None;
        }
        if (b & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        b ^= bit;
    }
    Some((sign, b))
}

fn ladder_image(op: Ladder) -> [(PauliString, Complex64); 2] {
    let bit = 1u64 << op.mode;
    let below = bit - 1;
    let xs = PauliString::new(bit, below);
    let ys = PauliString::new(bit, below | bit);
    let half = Complex64::new(0.5, 0.0);
    let im = if op.dagger {
        Complex64::new(0.0, -0.5)
    } else {
        Complex64::new(0.0, 0.5)
    };
    [(xs, half), (ys, im)]
}

/// Accumulates the Jordan–Wigner image of `coeff · ops` into `acc`.
pub fn jordan_wigner_into(
    ops: &[Ladder],
    coeff: Complex64,
    acc: &mut HashMap<PauliString, Complex64>,
) {
    let images: Vec<[(PauliString, Complex64); 2]> = ops.iter().map(|&o| ladder_image(o)).collect();
    let k = ops.len();
    for choice in 0..(1u32 << k) {
        let mut phase = coeff;
        let mut p = PauliString::IDENTITY;
        for (slot, img) in images.iter().enumerate() {
            let (q, c) = img[((choice >> slot) & 1) as usize];
            let (ph, r) = p.mul(&q);
            phase *= ph * c;
            p = r;
        }
        *acc.entry(p).or_default() += phase;
    }
}

/// Jordan–Wigner image of a single product of ladder operators.
pub fn jordan_wigner(ops: &[Ladder], coeff: Complex64, n_qubits: usize) -> Result<PauliSum> {
    if let Some(bad) = ops.iter().find(|o| o.mode >= n_qubits) {
        return Err(Error::IndexOutOfRange {
            index: bad.mode,
            limit: n_qubits,
        });
    }
    let mut acc = HashMap::new();
    jordan_wigner_into(ops, coeff, &mut acc);
    Ok(PauliSum::from_terms(n_qubits, acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcitationKind {
    Single,
    Double,
}

/// A particle-number and Sz conserving excitation `a†_a a_i` or
/// `a†_a a†_b a_i a_j` on spin orbitals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FermionGenerator {
    pub occupied: Vec<usize>,
    pub virtuals: Vec<usize>,
}

impl FermionGenerator {
    pub fn single(i: usize, a: usize) -> Self {
        Self {
            occupied: vec![i],
            virtuals: vec![a],
        }
    }

    pub fn double(i: usize, j: usize, a: usize, b: usize) -> Self {
        Self {
            occupied: vec![i, j],
            virtuals: vec![a, b],
        }
    }

    pub fn kind(&self) -> ExcitationKind {
        if self.occupied.len() == 1 {
            ExcitationKind::Single
        } else {
            ExcitationKind::Double
        }
    }

    /// Ladder product for the excitation operator itself.
    pub fn ladders(&self) -> Vec<Ladder> {
        match self.kind() {
            ExcitationKind::Single => {
                vec![
                    Ladder::create(self.virtuals[0]),
                    Ladder::annihilate(self.occupied[0]),
                ]
            }
            ExcitationKind::Double => vec![
                Ladder::create(self.virtuals[0]),
                Ladder::create(self.virtuals[1]),
                Ladder::annihilate(self.occupied[0]),
                Ladder::annihilate(self.occupied[1]),
            ],
        }
    }

    /// Ladder product of the adjoint.
    pub fn adjoint_ladders(&self) -> Vec<Ladder> {
        self.ladders()
            .into_iter()
            .rev()
            .map(|l| Ladder {
                mode: l.mode,
                dagger: !l.dagger,
            })
            .collect()
    }

    pub fn modes(&self) -> impl Iterator<Item = usize> + '_ {
        self.occupied.iter().chain(self.virtuals.iter()).copied()
    }

    pub fn max_mode(&self) -> usize {
        self.modes().max().unwrap_or(0)
    }

    pub fn mask(&self) -> u64 {
        self.modes().fold(0, |m, q| m | (1 << q))
    }

    pub fn conserves_sz(&self) -> bool {
        let spin = |v: &[usize]| v.iter().map(|q| q % 2).sum::<usize>();
        spin(&self.occupied) == spin(&self.virtuals)
    }

    /// `G|b⟩`, if non-zero.
    #[inline]
    pub fn apply(&self, b: u64) -> Option<(f64, u64)> {
        let (o, v) = (&self.occupied, &self.virtuals);
        match self.kind() {
            ExcitationKind::Single => {
                apply_ladders(&[Ladder::create(v[0]), Ladder::annihilate(o[0])], b)
            }
            ExcitationKind::Double => apply_ladders(
                &[
                    Ladder::create(v[0]),
                    Ladder::create(v[1]),
                    Ladder::annihilate(o[0]),
                    Ladder::annihilate(o[1]),
                ],
                b,
            ),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad excitation '{s}'"));
        let (occ, virt) = s.split_once("->").ok_or_else(bad)?;
        let nums = |t: &str| -> Result<Vec<usize>> {
            t.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect()
        };
        let (o, v) = (nums(occ)?, nums(virt)?);
        if o.len() != v.len() || o.is_empty() || o.len() > 2 {
            return Err(bad());
        }
        Ok(Self {
            occupied: o,
            virtuals: v,
        })
    }
}

impl fmt::Display for FermionGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}->{}", join(&self.occupied), join(&self.virtuals))
    }
}

/// Jordan–Wigner image of `G − G†`. All coefficients are purely imaginary.
pub fn anti_hermitian_image(g: &FermionGenerator, n_qubits: usize) -> Result<PauliSum> {
    let fwd = jordan_wigner(&g.ladders(), Complex64::new(1.0, 0.0), n_qubits)?;
    Ok(fwd.sub(&fwd.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::pauli::Axis;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn number_operator_image() {
        let n0 =
            jordan_wigner(&[Ladder::create(0), Ladder::annihilate(0)], c(1.0, 0.0), 1).unwrap();
        let expect = PauliSum::from_terms(
            1,
            [
                (PauliString::IDENTITY, c(0.5, 0.0)),
                (PauliString::single(0, Axis::Z), c(-0.5, 0.0)),
            ],
        );
        assert_eq!(n0, expect);
    }

    #[test]
    fn hopping_image() {
        let a = jordan_wigner(&[Ladder::create(1), Ladder::annihilate(0)], c(1.0, 0.0), 2).unwrap();
        let b = jordan_wigner(&[Ladder::create(0), Ladder::annihilate(1)], c(1.0, 0.0), 2).unwrap();
        let expect = PauliSum::from_terms(
            2,
            [
                (PauliString::parse("X0X1").unwrap(), c(0.5, 0.0)),
                (PauliString::parse("Y0Y1").unwrap(), c(0.5, 0.0)),
            ],
        );
        assert_eq!(a.add(&b), expect);
    }

    #[test]
    fn out_of_range_mode() {
        assert!(jordan_wigner(&[Ladder::create(4)], c(1.0, 0.0), 4).is_err());
    }

    #[test]
    fn single_excitation_image() {
        let img = anti_hermitian_image(&FermionGenerator::single(0, 2), 4).unwrap();
        assert_eq!(img.len(), 2);
        assert!(img.is_anti_hermitian(1e-15));
        let xzy = img.coefficient(&PauliString::parse("X0Z1Y2").unwrap());
        let yzx = img.coefficient(&PauliString::parse("Y0Z1X2").unwrap());
        assert!((xzy.im.abs() - 0.5).abs() < 1e-15 && (xzy + yzx).norm() < 1e-15);
    }

    #[test]
    fn double_excitation_has_eight_terms() {
        let img = anti_hermitian_image(&FermionGenerator::double(0, 1, 2, 3), 4).unwrap();
        assert_eq!(img.len(), 8);
        assert!(img.add(&img.adjoint()).is_empty());
    }

    #[test]
    fn ladder_action_matches_jw_matrix() {
        // Bitstring signs and the Pauli image describe the same operator.
        let n = 4;
        for ops in [
            vec![Ladder::create(3), Ladder::annihilate(0)],
            vec![
                Ladder::create(2),
                Ladder::create(3),
                Ladder::annihilate(0),
                Ladder::annihilate(1),
            ],
            vec![Ladder::annihilate(2)],
        ] {
            let dense = jordan_wigner(&ops, c(1.0, 0.0), n).unwrap().to_dense();
            for b in 0..(1u64 << n) {
                for out in 0..(1u64 << n) {
                    let expect = match apply_ladders(&ops, b) {
                        Some((s, b2)) if b2 == out => s,
                        _ => 0.0,
                    };
                    assert!((dense[(out as usize, b as usize)] - c(expect, 0.0)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn anticommutation_relations() {
        let n = 6;
        let dim = 1 << n;
        let id = nalgebra::DMatrix::<Complex64>::identity(dim, dim);
        for p in 0..n {
            let ap = jordan_wigner(&[Ladder::annihilate(p)], c(1.0, 0.0), n)
                .unwrap()
                .to_dense();
            for q in 0..n {
                let aq_dag = jordan_wigner(&[Ladder::create(q)], c(1.0, 0.0), n)
                    .unwrap()
                    .to_dense();
                let aq = jordan_wigner(&[Ladder::annihilate(q)], c(1.0, 0.0), n)
                    .unwrap()
                    .to_dense();
                let anti = &ap * &aq_dag + &aq_dag * &ap;
                let expect = if p == q {
                    id.clone()
                } else {
                    id.clone() * c(0.0, 0.0)
                };
                assert!((anti - expect).camax() < 1e-13, "{{a_{p}, a†_{q}}}");
                let aa = &ap * &aq + &aq * &ap;
                assert!(aa.camax() < 1e-13);
            }
        }
    }

    #[test]
    fn generator_text_round_trip() {
        let g = FermionGenerator::double(0, 1, 4, 7);
        assert_eq!(FermionGenerator::parse(&g.to_string()).unwrap(), g);
        assert!(FermionGenerator::parse("0->").is_err());
    }
}

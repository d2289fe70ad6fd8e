use super::fermion::FermionGenerator;

/// All Sz-conserving single and double excitations out of a Hartree–Fock
/// filling where the first `n_occ_spin` spin orbitals are occupied.
///
/// Singles come first, then doubles, each in lexicographic order of
/// `(occupied…, virtual…)`.
pub fn build_excitation_pool(n_occ_spin: usize, n_virt_spin: usize) -> Vec<FermionGenerator> {
    let occ: Vec<usize> = (0..n_occ_spin).collect();
    let virt: Vec<usize> = (n_occ_spin..n_occ_spin + n_virt_spin).collect();
    let mut pool = Vec::new();
    for &i in &occ {
        for &a in &virt {
            if i % 2 == a % 2 {
                pool.push(FermionGenerator::single(i, a));
            }
        }
    }
    for (x, &i) in occ.iter().enumerate() {
        for &j in &occ[x + 1..] {
            for (y, &a) in virt.iter().enumerate() {
                for &b in &virt[y + 1..] {
                    let g = FermionGenerator::double(i, j, a, b);
                    if g.conserves_sz() {
                        pool.push(g);
                    }
                }
            }
        }
    }
    pool
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent count: enumerate every subset of occupied/virtual pairs.
    fn brute_count(o: usize, v: usize) -> usize {
        let mut n = 0;
        for i in 0..o {
            for a in o..o + v {
                n += (i % 2 == a % 2) as usize;
            }
        }
        for i in 0..o {
            for j in 0..o {
                for a in o..o + v {
                    for b in o..o + v {
                        if i < j && a < b && (i % 2 + j % 2) == (a % 2 + b % 2) {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }

    #[test]
    fn pool_sizes() {
        assert_eq!(build_excitation_pool(6, 6).len(), 117);
        assert_eq!(build_excitation_pool(2, 2).len(), 3);
        assert_eq!(build_excitation_pool(4, 4).len(), 26);
        assert!(build_excitation_pool(4, 0).is_empty());
        for (o, v) in [(6, 6), (2, 2), (4, 4), (10, 4), (6, 10)] {
            assert_eq!(build_excitation_pool(o, v).len(), brute_count(o, v));
        }
    }

    #[test]
    fn h2_pool_order() {
        let p = build_excitation_pool(2, 2);
        assert_eq!(p[0], FermionGenerator::single(0, 2));
        assert_eq!(p[1], FermionGenerator::single(1, 3));
        assert_eq!(p[2], FermionGenerator::double(0, 1, 2, 3));
    }
}

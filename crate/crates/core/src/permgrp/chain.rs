use num_bigint::BigUint;

use super::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Permutation>,
    /// `transversal[beta]` maps `base` to `beta`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<u32>,
}

impl Level {
    fn new(degree: usize, base: u32) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            transversal: vec![None; degree],
            orbit: Vec::new(),
        };
        level.recompute_orbit(degree);
        level
    }

    fn recompute_orbit(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.base as usize] = Some(Permutation::identity(degree));
        self.orbit = vec![self.base];
        let mut i = 0;
        while i < self.orbit.len() {
            let beta = self.orbit[i];
            let u = self.transversal[beta as usize].clone().expect("orbit point");
            for s in &self.gens {
                let gamma = s.apply(beta);
                if self.transversal[gamma as usize].is_none() {
                    self.transversal[gamma as usize] = Some(u.then(s));
                    self.orbit.push(gamma);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set, built by deterministic Schreier–Sims
/// with base points chosen as smallest moved points.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn build(degree: usize, generators: &[Permutation]) -> StabChain {
        let gens: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in &gens {
            if chain.levels.iter().all(|l| g.apply(l.base) == l.base) {
                let b = g.smallest_moved_point().expect("non-identity");
                chain.levels.push(Level::new(degree, b));
            }
        }
        for i in 0..chain.levels.len() {
            let fixing: Vec<Permutation> = gens
                .iter()
                .filter(|g| chain.levels[..i].iter().all(|l| g.apply(l.base) == l.base))
                .cloned()
                .collect();
            chain.levels[i].gens = fixing;
            chain.levels[i].recompute_orbit(degree);
        }

        let mut i = chain.levels.len() as isize - 1;
        while i >= 0 {
            match chain.first_failing_schreier_generator(i as usize) {
                Some((residue, j)) => {
                    if j == chain.levels.len() {
                        let b = residue.smallest_moved_point().expect("non-identity residue");
                        chain.levels.push(Level::new(degree, b));
                    }
                    for l in (i as usize + 1)..=j {
                        chain.levels[l].gens.push(residue.clone());
                        chain.levels[l].recompute_orbit(degree);
                    }
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
        chain
    }

    /// Returns the sift residue and the level where sifting stopped for the
    /// first Schreier generator of level `i` that does not sift to the
    /// identity through the levels below it.
    fn first_failing_schreier_generator(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        for &beta in &level.orbit {
            let u = level.transversal[beta as usize].as_ref().unwrap();
            for s in &level.gens {
                let gamma = s.apply(beta);
                let v = level.transversal[gamma as usize].as_ref().unwrap();
                let h = u.then(s).then(&v.inverse());
                if h.is_identity() {
                    continue;
                }
                let (residue, j) = self.sift(h, i + 1);
                if j < self.levels.len() || !residue.is_identity() {
                    return Some((residue, j));
                }
            }
        }
        None
    }

    fn sift(&self, mut h: Permutation, from: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.apply(level.base);
            match &level.transversal[beta as usize] {
                Some(u) => h = h.then(&u.inverse()),
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        let (residue, j) = self.sift(p.clone(), 0);
        j == self.levels.len() && residue.is_identity()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }
}

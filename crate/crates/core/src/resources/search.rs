//! Away-step Frank–Wolfe minimisation of `S(ρ‖σ)` over two-qubit separable
//! states, represented as finite mixtures of pure product states.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, RslError};
use crate::qcore::entropy::{log_from_eigen, null_space_weight, SUPPORT_TOL};
use crate::qcore::{random, von_neumann_entropy, CMatrix, DensityMatrix, HermitianEigen, DEFAULT_FLOOR};
use crate::scalar::Real;

const INNER_ITERATIONS: usize = 50;
const INNER_TOL: f64 = 1e-10;
const LINE_SEARCH_ITERATIONS: usize = 60;
const DROP_WEIGHT: f64 = 1e-14;
/// Eigenvalues below this are clamped when forming the log-derivative.
const GRADIENT_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Random starting mixtures, in addition to two deterministic seeds.
    pub restarts: usize,
    /// Frank–Wolfe iterations per start.
    pub iterations: usize,
    /// Product states in each random starting mixture.
    pub mixture_size: usize,
    /// Duality-gap threshold for convergence.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 6,
            iterations: 400,
            mixture_size: 16,
            tolerance: 1e-7,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.restarts == 0 || self.iterations == 0 {
            return Err(RslError::InvalidArgument(
                "restarts and iterations must be positive".into(),
            ));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-2) {
            return Err(RslError::InvalidArgument(format!(
                "search tolerance {} outside (0, 1e-2]",
                self.tolerance
            )));
        }
        if self.mixture_size < dim * dim {
            return Err(RslError::InvalidArgument(format!(
                "mixture_size {} below dim^2 = {}",
                self.mixture_size,
                dim * dim
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult<T: Real = f64> {
    /// Best separable state found.
    pub state: DensityMatrix<T>,
    /// `S(ρ‖state)`, an upper bound on the relative entropy of entanglement.
    pub value: T,
    /// Final Frank–Wolfe duality gap of the winning start.
    pub gap: T,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
struct Atom<T: Real> {
    vector: [Complex<T>; 4],
}

impl<T: Real> Atom<T> {
    fn product(a: &[Complex<T>], b: &[Complex<T>]) -> Self {
        Self {
            vector: [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]],
        }
    }

    fn projector(&self) -> CMatrix<T> {
        CMatrix::outer(&self.vector, &self.vector)
    }

    fn same_as(&self, other: &Self) -> bool {
        let overlap: Complex<T> = self
            .vector
            .iter()
            .zip(&other.vector)
            .map(|(x, y)| x.conj() * y)
            .fold(Complex::zero(), |acc, z| acc + z);
        overlap.norm() > T::one() - T::lit(1e-12)
    }
}

struct Problem<'a, T: Real> {
    rho: &'a DensityMatrix<T>,
    entropy: T,
}

impl<T: Real> Problem<'_, T> {
    /// `S(ρ‖σ)`, infinite on support violation.
    fn objective(&self, sigma: &CMatrix<T>) -> T {
        let eig = HermitianEigen::new(sigma);
        let floor = T::lit(DEFAULT_FLOOR);
        if null_space_weight(self.rho.matrix(), &eig, floor) > T::tol(SUPPORT_TOL) {
            return T::infinity();
        }
        -self.entropy - log_from_eigen(&eig, floor).trace_with(self.rho.matrix())
    }

    /// `K = D log(σ)[ρ]`, so that `∇_σ S(ρ‖σ) = −K`.
    fn log_derivative(&self, sigma: &CMatrix<T>) -> CMatrix<T> {
        let eig = HermitianEigen::new(sigma);
        let v = &eig.vectors;
        let floor = T::lit(GRADIENT_FLOOR);
        let lam: Vec<T> = eig.values.iter().map(|&l| l.max(floor)).collect();
        let rt = v.adjoint().matmul(self.rho.matrix()).matmul(v);
        let k = CMatrix::from_fn(4, |i, j| {
            let (a, b) = (lam[i], lam[j]);
            let w = if (a - b).abs() <= T::lit(1e-12) * a.max(b) {
                T::lit(2.0) / (a + b)
            } else {
                (a.ln() - b.ln()) / (a - b)
            };
            rt[(i, j)] * w
        });
        v.matmul(&k).matmul(&v.adjoint())
    }
}

fn mixture<T: Real>(atoms: &[(Atom<T>, T)]) -> CMatrix<T> {
    let mut m = CMatrix::zeros(4);
    for (a, w) in atoms {
        m += &a.projector().scale(*w);
    }
    m
}

fn top_vector<T: Real>(m: &CMatrix<T>) -> Vec<Complex<T>> {
    let e = HermitianEigen::new(m);
    e.vector(e.dim() - 1)
}

/// Maximises `⟨ab|K|ab⟩` over unit `a, b ∈ C²` by alternating 2×2
/// eigenproblems from several starts.
fn product_oracle<T: Real>(k: &CMatrix<T>) -> (Atom<T>, T) {
    let o = T::zero();
    let l = T::one();
    let h = T::FRAC_1_SQRT_2();
    let starts: [[Complex<T>; 2]; 4] = [
        [Complex::new(l, o), Complex::new(o, o)],
        [Complex::new(o, o), Complex::new(l, o)],
        [Complex::new(h, o), Complex::new(h, o)],
        [Complex::new(h, o), Complex::new(o, h)],
    ];
    let mut best: Option<(Atom<T>, T)> = None;
    for start in starts {
        let mut b = start.to_vec();
        let mut a = vec![Complex::zero(); 2];
        let mut prev = T::neg_infinity();
        for _ in 0..INNER_ITERATIONS {
            let ka = CMatrix::from_fn(2, |i, j| {
                let mut acc = Complex::zero();
                for p in 0..2 {
                    for q in 0..2 {
                        acc = acc + b[p].conj() * k[(2 * i + p, 2 * j + q)] * b[q];
                    }
                }
                acc
            });
            a = top_vector(&ka);
            let kb = CMatrix::from_fn(2, |p, q| {
                let mut acc = Complex::zero();
                for i in 0..2 {
                    for j in 0..2 {
                        acc = acc + a[i].conj() * k[(2 * i + p, 2 * j + q)] * a[j];
                    }
                }
                acc
            });
            b = top_vector(&kb);
            let val = k.expectation(&Atom::product(&a, &b).vector);
            if (val - prev).abs() <= T::lit(INNER_TOL) {
                prev = val;
                break;
            }
            prev = val;
        }
        let atom = Atom::product(&a, &b);
        if best.as_ref().map_or(true, |(_, v)| prev > *v) {
            best = Some((atom, prev));
        }
    }
    best.expect("at least one start")
}

/// Minimises `φ` on `[0, hi]` for convex `φ`, returning the argmin and value.
fn golden_section<T: Real>(hi: T, phi: impl Fn(T) -> T) -> (T, T) {
    let r = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let (mut a, mut b) = (T::zero(), hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (phi(c), phi(d));
    for _ in 0..LINE_SEARCH_ITERATIONS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = phi(d);
        }
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [T::zero(), hi] {
        let fx = phi(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    best
}

struct Run<T: Real> {
    sigma: CMatrix<T>,
    value: T,
    gap: T,
    converged: bool,
    iterations: usize,
}

fn frank_wolfe<T: Real>(problem: &Problem<'_, T>, mut atoms: Vec<(Atom<T>, T)>, config: &SearchConfig) -> Run<T> {
    let tol = T::lit(config.tolerance);
    let mut sigma = mixture(&atoms);
    let mut value = problem.objective(&sigma);
    let mut gap = T::infinity();
    let mut iterations = 0;
    while iterations < config.iterations {
        iterations += 1;
        let k = problem.log_derivative(&sigma);
        let (s, top) = product_oracle(&k);
        // Tr[K σ] = Tr ρ = 1 for the exact log-derivative
        let tr_k_sigma = k.trace_product(&sigma).re;
        gap = top - tr_k_sigma;
        if gap <= tol {
            break;
        }
        let (worst_idx, worst_val) = atoms
            .iter()
            .enumerate()
            .map(|(i, (a, _))| (i, k.expectation(&a.vector)))
            .fold((0, T::infinity()), |acc, x| if x.1 < acc.1 { x } else { acc });
        let away_gap = tr_k_sigma - worst_val;
        let w_away = atoms[worst_idx].1;
        let use_away = away_gap > gap && atoms.len() > 1 && w_away < T::one();

        let (direction, step_max) = if use_away {
            let v = atoms[worst_idx].0.projector();
            (&sigma - &v, w_away / (T::one() - w_away))
        } else {
            (&s.projector() - &sigma, T::one())
        };
        let (step, new_value) = golden_section(step_max, |g| problem.objective(&(&sigma + &direction.scale(g))));
        if !(new_value < value) || step <= T::zero() {
            if use_away {
                // fall back to a plain Frank–Wolfe step before giving up
                let d = &s.projector() - &sigma;
                let (st, nv) = golden_section(T::one(), |g| problem.objective(&(&sigma + &d.scale(g))));
                if nv < value && st > T::zero() {
                    apply_fw_step(&mut atoms, s, st);
                    sigma = mixture(&atoms);
                    value = problem.objective(&sigma);
                    continue;
                }
            }
            break;
        }
        if use_away {
            for (_, w) in atoms.iter_mut() {
                *w = *w * (T::one() + step);
            }
            atoms[worst_idx].1 = atoms[worst_idx].1 - step;
            atoms.retain(|(_, w)| *w > T::lit(DROP_WEIGHT));
        } else {
            apply_fw_step(&mut atoms, s, step);
        }
        let total: T = atoms.iter().map(|(_, w)| *w).sum();
        for (_, w) in atoms.iter_mut() {
            *w = *w / total;
        }
        sigma = mixture(&atoms);
        value = problem.objective(&sigma);
    }
    Run {
        sigma,
        value,
        gap,
        converged: gap <= tol,
        iterations,
    }
}

fn apply_fw_step<T: Real>(atoms: &mut Vec<(Atom<T>, T)>, s: Atom<T>, step: T) {
    for (_, w) in atoms.iter_mut() {
        *w = *w * (T::one() - step);
    }
    if let Some(existing) = atoms.iter_mut().find(|(a, _)| a.same_as(&s)) {
        existing.1 = existing.1 + step;
    } else {
        atoms.push((s, step));
    }
    atoms.retain(|(_, w)| *w > T::lit(DROP_WEIGHT));
}

/// Product atoms from the Schmidt decompositions of ρ's eigenvectors: a
/// separable state whose relative entropy to ρ never exceeds `ln 2`.
fn schmidt_seed<T: Real>(rho: &DensityMatrix<T>) -> Vec<(Atom<T>, T)> {
    let eig = rho.eigen();
    let mut atoms = Vec::new();
    for k in 0..4 {
        let p = eig.values[k];
        if p <= T::lit(1e-15) {
            continue;
        }
        let psi = eig.vector(k);
        let c = CMatrix::from_vec(2, psi.clone()).expect("2x2");
        let cc = HermitianEigen::new(&c.matmul(&c.adjoint()));
        for j in 0..2 {
            let s2 = cc.values[j];
            if s2 <= T::lit(1e-15) {
                continue;
            }
            let u = cc.vector(j);
            // v = Cᵀ ū / s
            let s = s2.sqrt();
            let v: Vec<Complex<T>> = (0..2)
                .map(|q| (0..2).fold(Complex::zero(), |acc, i| acc + c[(i, q)] * u[i].conj()) / s)
                .collect();
            atoms.push((Atom::product(&u, &v), p * s2));
        }
    }
    atoms
}

fn dephased_seed<T: Real>(rho: &DensityMatrix<T>) -> Vec<(Atom<T>, T)> {
    let o = Complex::zero();
    let l = Complex::new(T::one(), T::zero());
    let basis = [[l, o], [o, l]];
    (0..4)
        .filter(|&i| rho.matrix()[(i, i)].re > T::zero())
        .map(|i| (Atom::product(&basis[i / 2], &basis[i % 2]), rho.matrix()[(i, i)].re))
        .collect()
}

fn random_seed<T: Real>(rng: &mut ChaCha8Rng, size: usize) -> Vec<(Atom<T>, T)> {
    let mut atoms: Vec<(Atom<T>, T)> = (0..size)
        .map(|_| {
            let a = random::random_pure_vector::<T, _>(rng, 2);
            let b = random::random_pure_vector::<T, _>(rng, 2);
            (Atom::product(&a, &b), T::lit(rng.gen_range(0.05..1.0)))
        })
        .collect();
    let total: T = atoms.iter().map(|(_, w)| *w).sum();
    for (_, w) in atoms.iter_mut() {
        *w = *w / total;
    }
    atoms
}

/// Numerical upper bound on the relative entropy of entanglement of a
/// two-qubit state.
///
/// Runs away-step Frank–Wolfe from two deterministic separable seeds (the
/// Schmidt-dephased eigendecomposition and the computational-basis
/// dephasing of ρ) and `restarts` random product mixtures, in parallel, and
/// keeps the smallest `S(ρ‖σ)`.
pub fn separable_search<T: Real>(rho: &DensityMatrix<T>, config: &SearchConfig) -> Result<SearchResult<T>> {
    if rho.local_dims() != [2, 2] {
        return Err(RslError::InvalidArgument(format!(
            "separable search needs a two-qubit state, got local dims {:?}",
            rho.local_dims()
        )));
    }
    config.validate(rho.dim())?;
    let problem = Problem {
        rho,
        entropy: von_neumann_entropy(rho),
    };
    let runs: Vec<Run<T>> = (0..config.restarts + 2)
        .into_par_iter()
        .map(|r| {
            let atoms = match r {
                0 => schmidt_seed(rho),
                1 => dephased_seed(rho),
                _ => {
                    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
                    random_seed(&mut rng, config.mixture_size)
                }
            };
            frank_wolfe(&problem, atoms, config)
        })
        .collect();
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one run");
    let trace = best.sigma.trace().re;
    let state = DensityMatrix::from_trusted(best.sigma.scale(T::one() / trace), vec![2, 2]);
    Ok(SearchResult {
        value: best.value.max(T::zero()),
        state,
        gap: best.gap,
        converged: best.converged,
        iterations: best.iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{dephase, relative_entropy, states};

    fn quick() -> SearchConfig {
        SearchConfig {
            restarts: 2,
            iterations: 150,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn product_state_has_no_entanglement() {
        let rho = states::basis_state::<f64>(&[2, 2], 1).unwrap();
        let res = separable_search(&rho, &quick()).unwrap();
        assert!(res.value <= 1e-6);
    }

    #[test]
    fn bell_state_gives_ln2() {
        let res = separable_search(&states::bell_phi_plus::<f64>(), &quick()).unwrap();
        assert!((res.value - std::f64::consts::LN_2).abs() < 1e-3);
    }

    #[test]
    fn never_worse_than_dephased_candidate() {
        let rho = states::werner::<f64>(0.5).unwrap();
        let res = separable_search(&rho, &quick()).unwrap();
        let cand = relative_entropy(&rho, &dephase(&rho), 1e-12).unwrap();
        assert!(res.value <= cand + 1e-6);
        // the state reported reproduces the value
        let v = relative_entropy(&rho, &res.state, 1e-12).unwrap();
        assert!((v - res.value).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        let rho = states::werner::<f64>(0.5).unwrap();
        let bad = SearchConfig {
            tolerance: 0.1,
            ..SearchConfig::default()
        };
        assert!(separable_search(&rho, &bad).is_err());
        let small = SearchConfig {
            mixture_size: 4,
            ..SearchConfig::default()
        };
        assert!(separable_search(&rho, &small).is_err());
        assert!(separable_search(&states::plus_y::<f64>(), &SearchConfig::default()).is_err());
    }

    #[test]
    fn schmidt_seed_is_a_valid_separable_state() {
        let rho = states::werner::<f64>(0.3).unwrap();
        let m = mixture(&schmidt_seed(&rho));
        assert!((m.trace().re - 1.0).abs() < 1e-12);
        assert!(HermitianEigen::new(&m).min_value() > -1e-12);
    }
}

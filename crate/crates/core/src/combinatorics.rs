//! Pair partitions, semicircular moments and the pairing-to-permutation map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::DMatrix;

use crate::chebyshev::poly_p;
use crate::error::{Error, Result};

/// Largest ground set accepted by [`enumerate_p2`].
pub const P2_CAP: usize = 12;
/// Largest ground set accepted by [`enumerate_nc2`].
pub const NC2_CAP: usize = 16;

/// A perfect matching of a finite ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairPartition<T = usize> {
    pairs: Vec<(T, T)>,
}

impl<T: Ord + Clone> PairPartition<T> {
    /// Build from blocks, checking they are disjoint two-element sets.
    pub fn new(pairs: Vec<(T, T)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (a, b) in &pairs {
            if a == b || !seen.insert(a.clone()) || !seen.insert(b.clone()) {
                return Err(Error::MalformedPairing("blocks must be disjoint pairs".into()));
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(T, T)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Partner of `x`, if `x` is covered.
    pub fn partner(&self, x: &T) -> Option<&T> {
        self.pairs.iter().find_map(|(a, b)| {
            if a == x {
                Some(b)
            } else if b == x {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Ground set covered by the blocks.
    pub fn support(&self) -> BTreeSet<T> {
        self.pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect()
    }
}

impl PairPartition<usize> {
    /// True when two blocks interleave as `i1 < i2 < i3 < i4`.
    pub fn is_crossing(&self) -> bool {
        let norm: Vec<(usize, usize)> = self.pairs.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        norm.iter()
            .any(|&(a, b)| norm.iter().any(|&(c, d)| a < c && c < b && b < d))
    }
}

fn p2_rec<T: Clone>(rest: &[T], acc: &mut Vec<(T, T)>, out: &mut Vec<PairPartition<T>>) {
    let Some((first, tail)) = rest.split_first() else {
        out.push(PairPartition { pairs: acc.clone() });
        return;
    };
    for i in 0..tail.len() {
        let mut remaining = tail.to_vec();
        let partner = remaining.remove(i);
        acc.push((first.clone(), partner));
        p2_rec(&remaining, acc, out);
        acc.pop();
    }
}

/// All pairings of `ground`; `(|S|−1)!!` of them for even `|S|`, none for odd.
pub fn enumerate_p2<T: Clone + Ord>(ground: &[T]) -> Result<Vec<PairPartition<T>>> {
    if ground.len() > P2_CAP {
        return Err(Error::EnumerationCap {
            size: ground.len(),
            cap: P2_CAP,
        });
    }
    if ground.len() % 2 == 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    p2_rec(ground, &mut Vec::new(), &mut out);
    Ok(out)
}

fn nc2_rec(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
    if lo > hi {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for m in (lo + 1..=hi).step_by(2) {
        let inner = nc2_rec(lo + 1, m - 1);
        let outer = nc2_rec(m + 1, hi);
        for a in &inner {
            for b in &outer {
                let mut p = Vec::with_capacity(1 + a.len() + b.len());
                p.push((lo, m));
                p.extend_from_slice(a);
                p.extend_from_slice(b);
                out.push(p);
            }
        }
    }
    out
}

/// Non-crossing pairings of `{1, …, n}`.
pub fn enumerate_nc2(n: usize) -> Result<Vec<PairPartition>> {
    if n > NC2_CAP {
        return Err(Error::EnumerationCap { size: n, cap: NC2_CAP });
    }
    if n % 2 == 1 {
        return Ok(Vec::new());
    }
    if n == 0 {
        return Ok(vec![PairPartition { pairs: Vec::new() }]);
    }
    Ok(nc2_rec(1, n).into_iter().map(|pairs| PairPartition { pairs }).collect())
}

/// Product over blocks of `e^{−|t1−t2|}` for blocks straddling the split
/// `{1..j} | {j+1..j+k}`, and 1 otherwise.
pub fn kappa_weight(pi: &PairPartition, j: usize, k: usize, t1: f64, t2: f64) -> Result<f64> {
    let expected: BTreeSet<usize> = (1..=j + k).collect();
    if pi.support() != expected {
        return Err(Error::MalformedPairing(format!("pairing is not over [{}]", j + k)));
    }
    let phi = (-(t1 - t2).abs()).exp();
    Ok(pi
        .pairs
        .iter()
        .filter(|&&(a, b)| (a <= j) != (b <= j))
        .fold(1.0, |w, _| w * phi))
}

/// A word `(M(t_1)/√n)^{d_1} ⋯ (M(t_m)/√n)^{d_m}` inside a normalized trace.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentQuery {
    pub word: Vec<(usize, f64)>,
}

impl MomentQuery {
    pub fn new(word: Vec<(usize, f64)>) -> Self {
        Self { word }
    }

    pub fn degree(&self) -> usize {
        self.word.iter().map(|w| w.0).sum()
    }

    fn letters(&self) -> Vec<f64> {
        self.word.iter().flat_map(|&(d, t)| std::iter::repeat_n(t, d)).collect()
    }
}

/// Leading-order normalized trace moment of a word in the stationary matrix
/// process: a sum over non-crossing pairings of the kernel `e^{−|t−t′|}`.
pub fn semicircular_mixed_moment(query: &MomentQuery) -> Result<f64> {
    let letters = query.letters();
    let mut total = 0.0;
    for pi in enumerate_nc2(letters.len())? {
        total += pi
            .pairs
            .iter()
            .map(|&(a, b)| (-(letters[a - 1] - letters[b - 1]).abs()).exp())
            .product::<f64>();
    }
    Ok(total)
}

/// Exact leading-order `(1/n)E Tr(P_j(X(t1)) P_k(X(t2)))` as an integer
/// polynomial in `x = e^{−|t1−t2|}`; entry `s` is the coefficient of `x^s`.
pub fn semicircular_cov_poly(j: usize, k: usize) -> Result<Vec<i64>> {
    let pj = poly_p(j);
    let pk = poly_p(k);
    let mut out = vec![0i64; j.min(k) + 1];
    for p in (0..=j).filter(|&p| pj.coeff(p) != 0) {
        for q in (0..=k).filter(|&q| pk.coeff(q) != 0) {
            let c = pj.coeff(p) * pk.coeff(q);
            for pi in enumerate_nc2(p + q)? {
                let s = pi.pairs.iter().filter(|&&(a, b)| (a <= p) != (b <= p)).count();
                out[s] += c;
            }
        }
    }
    Ok(out)
}

/// Leading-order `(1/n)E Tr(P_j(X(t1)) P_k(X(t2)))`; equals `δ_{jk} e^{−k|t1−t2|}`.
pub fn semicircular_cov_p(j: usize, k: usize, t1: f64, t2: f64) -> Result<f64> {
    let x = (-(t1 - t2).abs()).exp();
    Ok(semicircular_cov_poly(j, k)?
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * x + c as f64))
}

/// Disjoint cycle decomposition of a permutation of a finite index set.
/// Stored canonically: each cycle starts at its smallest element and cycles
/// are ordered by that element. Fixed points are kept as 1-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermutationCycles {
    cycles: Vec<Vec<usize>>,
}

impl PermutationCycles {
    pub fn new(cycles: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for c in &cycles {
            if c.is_empty() {
                return Err(Error::MalformedPairing("empty cycle".into()));
            }
            for &x in c {
                if !seen.insert(x) {
                    return Err(Error::MalformedPairing(format!("element {x} repeated across cycles")));
                }
            }
        }
        let mut cycles: Vec<Vec<usize>> = cycles
            .into_iter()
            .map(|mut c| {
                let pos = c.iter().enumerate().min_by_key(|e| e.1).map_or(0, |e| e.0);
                c.rotate_left(pos);
                c
            })
            .collect();
        cycles.sort();
        Ok(Self { cycles })
    }

    /// From an explicit map `x ↦ σ(x)`.
    pub fn from_map(map: &BTreeMap<usize, usize>) -> Result<Self> {
        let mut left: BTreeSet<usize> = map.keys().copied().collect();
        let mut cycles = Vec::new();
        while let Some(&start) = left.iter().next() {
            let mut c = vec![start];
            left.remove(&start);
            let mut x = map[&start];
            while x != start {
                if !left.remove(&x) {
                    return Err(Error::MalformedPairing("map is not a bijection".into()));
                }
                c.push(x);
                x = *map
                    .get(&x)
                    .ok_or_else(|| Error::MalformedPairing("map is not closed".into()))?;
            }
            cycles.push(c);
        }
        Self::new(cycles)
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// `σ(x)`, or `None` if `x` is outside the index set.
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.cycles
            .iter()
            .find_map(|c| c.iter().position(|&y| y == x).map(|i| c[(i + 1) % c.len()]))
    }
}

impl fmt::Display for PermutationCycles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            let body: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

/// An element `(side, index)` of the doubled index set `{1,2} × J`.
pub type Slot = (u8, usize);

/// Pairing of the doubled index set `{1,2} × J`.
pub type DoubledPairing = PairPartition<Slot>;

/// The doubled index set `{1,2} × J` in lexicographic order.
pub fn doubled_set(index: &[usize]) -> Vec<Slot> {
    let mut v: Vec<Slot> = index.iter().flat_map(|&j| [(1u8, j), (2u8, j)]).collect();
    v.sort();
    v.dedup();
    v
}

/// Walk `slot ↦ flip(π(slot))` from the smallest open side-1 slot, closing a
/// cycle whenever the walk returns to its starting index.
pub fn perm_from_pairing(pi: &DoubledPairing) -> Result<PermutationCycles> {
    let support = pi.support();
    if support.iter().any(|&(a, _)| a != 1 && a != 2) {
        return Err(Error::MalformedPairing("sides must be 1 or 2".into()));
    }
    let index: BTreeSet<usize> = support.iter().map(|s| s.1).collect();
    let full: BTreeSet<Slot> = doubled_set(&index.iter().copied().collect::<Vec<_>>())
        .into_iter()
        .collect();
    if full != support {
        return Err(Error::MalformedPairing("pairing does not cover {1,2} × J".into()));
    }
    let partner: BTreeMap<Slot, Slot> = pi.pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
    let flip = |(a, j): Slot| (3 - a, j);

    let mut open = support;
    let mut cycles = Vec::new();
    while let Some(j0) = open.iter().find(|s| s.0 == 1).map(|s| s.1) {
        let mut cur: Slot = (1, j0);
        let mut cycle = vec![j0];
        loop {
            let next = flip(partner[&cur]);
            open.remove(&next);
            open.remove(&partner[&next]);
            if next.1 == j0 {
                break;
            }
            if cycle.contains(&next.1) || cycle.len() > index.len() {
                return Err(Error::MalformedPairing("walk revisited an index".into()));
            }
            cycle.push(next.1);
            cur = next;
        }
        cycles.push(cycle);
    }
    if !open.is_empty() {
        return Err(Error::MalformedPairing("walk left slots unvisited".into()));
    }
    PermutationCycles::new(cycles)
}

/// Number of pairings mapped onto `σ`: `2^{Σ(|σ_i|−1)}`.
pub fn perm_multiplicity(sigma: &PermutationCycles) -> u64 {
    1u64 << sigma.cycles.iter().map(|c| c.len() - 1).sum::<usize>()
}

/// All permutations of `index`.
pub fn all_permutations(index: &[usize]) -> Vec<PermutationCycles> {
    fn rec(items: &mut Vec<usize>, k: usize, index: &[usize], out: &mut Vec<PermutationCycles>) {
        if k == items.len() {
            let map = index.iter().copied().zip(items.iter().copied()).collect();
            out.push(PermutationCycles::from_map(&map).expect("permutation of a set"));
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            rec(items, k + 1, index, out);
            items.swap(k, i);
        }
    }
    let mut out = Vec::new();
    rec(&mut index.to_vec(), 0, index, &mut out);
    out
}

/// `E[Π_i θ(t_i)ᵀ A_i θ(t_i)]` for a Gaussian vector with
/// `E[θ_a(t)θ_b(s)] = δ_ab e^{−|t−s|}/n`, summed over pairings of the
/// doubled index set through [`perm_from_pairing`]. Matrices must be
/// symmetric and `n × n`.
pub fn perm_expansion_moment(mats: &[DMatrix<f64>], times: &[f64]) -> Result<f64> {
    if mats.len() != times.len() {
        return Err(Error::Dimension {
            expected: mats.len(),
            got: times.len(),
        });
    }
    let Some(n) = mats.first().map(|m| m.nrows()) else {
        return Ok(1.0);
    };
    let index: Vec<usize> = (1..=mats.len()).collect();
    let mut total = 0.0;
    for pi in enumerate_p2(&doubled_set(&index))? {
        let sigma = perm_from_pairing(&pi)?;
        let mut term = 1.0;
        for &i in &index {
            let s = sigma.apply(i).expect("index in permutation");
            term *= (-(times[i - 1] - times[s - 1]).abs()).exp() / n as f64;
        }
        for c in &sigma.cycles {
            let prod = c
                .iter()
                .skip(1)
                .fold(mats[c[0] - 1].clone(), |acc, &i| acc * &mats[i - 1]);
            term *= prod.trace();
        }
        total += term;
    }
    Ok(total)
}

/// Gaussian moment `2^{m/2} Σ_{π∈P₂(m)} Π e^{−rate·|Δt|} δ` for one family
/// of independent stationary processes with variance 2.
fn family_moment(entries: &[(usize, f64)], rate: impl Fn(usize) -> f64) -> Result<f64> {
    let m = entries.len();
    if m == 0 {
        return Ok(1.0);
    }
    let slots: Vec<usize> = (0..m).collect();
    let mut sum = 0.0;
    for pi in enumerate_p2(&slots)? {
        sum += pi
            .pairs
            .iter()
            .map(|&(a, b)| {
                let (ka, ta) = entries[a];
                let (kb, tb) = entries[b];
                if ka == kb {
                    (-rate(ka) * (ta - tb).abs()).exp()
                } else {
                    0.0
                }
            })
            .product::<f64>();
    }
    Ok(2f64.powf(m as f64 / 2.0) * sum)
}

/// Limiting joint moment `E[Π A_{k_i}(t_i) Π B_{k′_i}(t′_i)]` of the entry
/// limit: `A_k` has rate `2k−1`, `B_k` rate `2k`, all variance 2 and
/// independent. Arguments are `(index, time)` pairs with 1-based indices.
pub fn limiting_joint_moment(a: &[(usize, f64)], b: &[(usize, f64)]) -> Result<f64> {
    if a.iter().chain(b).any(|e| e.0 == 0) {
        return Err(crate::error::param("index", "entry indices are 1-based"));
    }
    Ok(family_moment(a, |k| 2.0 * k as f64 - 1.0)? * family_moment(b, |k| 2.0 * k as f64)?)
}

/// Catalan numbers via the convolution recurrence.
pub fn catalan(m: usize) -> u64 {
    let mut c = vec![1u64; m + 1];
    for i in 1..=m {
        c[i] = (0..i).map(|k| c[k] * c[i - 1 - k]).sum();
    }
    c[m]
}

/// `(2m−1)!!`, with `(−1)!! = 1`.
pub fn double_factorial_odd(m: usize) -> u64 {
    (1..=m).map(|i| 2 * i as u64 - 1).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::collections::HashMap;

    fn doubled(pairs: &[(Slot, Slot)]) -> DoubledPairing {
        PairPartition::new(pairs.to_vec()).unwrap()
    }

    #[test]
    fn nc2_four_points() {
        let mut got: Vec<Vec<(usize, usize)>> = enumerate_nc2(4).unwrap().into_iter().map(|p| p.pairs).collect();
        got.sort();
        assert_eq!(got, vec![vec![(1, 2), (3, 4)], vec![(1, 4), (2, 3)]]);
        assert!(enumerate_nc2(3).unwrap().is_empty());
        assert_eq!(enumerate_nc2(0).unwrap().len(), 1);
    }

    #[test]
    fn nc2_matches_filtered_p2() {
        for n in [2usize, 4, 6, 8, 10] {
            let ground: Vec<usize> = (1..=n).collect();
            let brute: BTreeSet<Vec<(usize, usize)>> = enumerate_p2(&ground)
                .unwrap()
                .into_iter()
                .filter(|p| !p.is_crossing())
                .map(|p| {
                    let mut v = p.pairs;
                    v.sort();
                    v
                })
                .collect();
            let direct: BTreeSet<Vec<(usize, usize)>> = enumerate_nc2(n)
                .unwrap()
                .into_iter()
                .map(|p| {
                    assert!(!p.is_crossing());
                    let mut v = p.pairs;
                    v.sort();
                    v
                })
                .collect();
            assert_eq!(brute, direct, "n={n}");
        }
    }

    #[test]
    fn catalan_counts() {
        let expected = [1u64, 1, 2, 5, 14, 42, 132, 429, 1430];
        for m in 0..=8 {
            assert_eq!(catalan(m), expected[m]);
            assert_eq!(enumerate_nc2(2 * m).unwrap().len() as u64, expected[m]);
        }
    }

    #[test]
    fn p2_counts_and_caps() {
        assert_eq!(enumerate_p2(&[1, 2, 3, 4]).unwrap().len(), 3);
        assert_eq!(enumerate_p2(&[1, 2, 3, 4, 5, 6]).unwrap().len(), 15);
        assert!(enumerate_p2(&[1, 2, 3]).unwrap().is_empty());
        assert!(matches!(
            enumerate_p2(&(0..14).collect::<Vec<_>>()),
            Err(Error::EnumerationCap { .. })
        ));
        assert!(matches!(enumerate_nc2(18), Err(Error::EnumerationCap { .. })));
    }

    #[test]
    fn kappa_examples() {
        let single = PairPartition::new(vec![(1, 2)]).unwrap();
        assert_relative_eq!(kappa_weight(&single, 1, 1, 0.2, 0.7).unwrap(), (-0.5f64).exp());
        let split = PairPartition::new(vec![(1, 2), (3, 4)]).unwrap();
        assert_eq!(kappa_weight(&split, 2, 2, 0.0, 3.0).unwrap(), 1.0);
        for pi in enumerate_nc2(6).unwrap() {
            assert_eq!(kappa_weight(&pi, 3, 3, 0.4, 0.4).unwrap(), 1.0);
        }
        assert!(kappa_weight(&split, 1, 1, 0.0, 0.0).is_err());
    }

    #[test]
    fn mixed_moments() {
        assert_eq!(
            semicircular_mixed_moment(&MomentQuery::new(vec![(4, 0.3)])).unwrap(),
            2.0
        );
        assert_eq!(
            semicircular_mixed_moment(&MomentQuery::new(vec![(2, 0.1), (0, 0.9)])).unwrap(),
            1.0
        );
        let m = semicircular_mixed_moment(&MomentQuery::new(vec![(1, 0.1), (1, 0.6)])).unwrap();
        assert_relative_eq!(m, (-0.5f64).exp());
        assert_eq!(
            semicircular_mixed_moment(&MomentQuery::new(vec![(3, 0.0)])).unwrap(),
            0.0
        );
    }

    #[test]
    fn cov_p_is_exactly_diagonal() {
        for j in 0..=7 {
            for k in 0..=7 {
                let poly = semicircular_cov_poly(j, k).unwrap();
                for (s, &c) in poly.iter().enumerate() {
                    let expected = i64::from(j == k && s == k);
                    assert_eq!(c, expected, "j={j} k={k} s={s}");
                }
            }
        }
        assert_relative_eq!(
            semicircular_cov_p(2, 2, 0.0, 0.5).unwrap(),
            (-1.0f64).exp(),
            epsilon = 1e-15
        );
        assert_eq!(semicircular_cov_p(3, 3, 0.2, 0.2).unwrap(), 1.0);
        assert_eq!(semicircular_cov_p(2, 4, 0.0, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn perm_worked_examples() {
        let pi = doubled(&[((1, 1), (1, 3)), ((2, 3), (2, 2)), ((1, 2), (1, 4)), ((2, 4), (2, 1))]);
        assert_eq!(perm_from_pairing(&pi).unwrap().to_string(), "(1 3 2 4)");
        let pi2 = doubled(&[((1, 1), (1, 2)), ((2, 2), (2, 1)), ((1, 3), (1, 4)), ((2, 4), (2, 3))]);
        assert_eq!(perm_from_pairing(&pi2).unwrap().to_string(), "(1 2)(3 4)");
        let id = doubled(&[((1, 1), (2, 1))]);
        assert_eq!(perm_from_pairing(&id).unwrap().to_string(), "(1)");
    }

    #[test]
    fn perm_rejects_malformed() {
        let missing = doubled(&[((1, 1), (1, 2))]);
        assert!(matches!(perm_from_pairing(&missing), Err(Error::MalformedPairing(_))));
        let bad_side = doubled(&[((1, 1), (3, 1))]);
        assert!(perm_from_pairing(&bad_side).is_err());
        assert!(PairPartition::new(vec![(1, 2), (2, 3)]).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        let id = PermutationCycles::new(vec![vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(perm_multiplicity(&id), 1);
        let four = PermutationCycles::new(vec![vec![3, 2, 4, 1]]).unwrap();
        assert_eq!(four.to_string(), "(1 3 2 4)");
        assert_eq!(perm_multiplicity(&four), 8);
    }

    #[test]
    fn perm_fiber_sizes_match_multiplicity() {
        for size in 1..=5usize {
            let index: Vec<usize> = (1..=size).collect();
            let mut fibers: HashMap<PermutationCycles, u64> = HashMap::new();
            let pairings = enumerate_p2(&doubled_set(&index)).unwrap();
            for pi in &pairings {
                *fibers.entry(perm_from_pairing(pi).unwrap()).or_default() += 1;
            }
            let all = all_permutations(&index);
            assert_eq!(fibers.len(), all.len(), "surjective onto S(J), |J|={size}");
            for sigma in &all {
                assert_eq!(fibers[sigma], perm_multiplicity(sigma), "{sigma}");
            }
            let total: u64 = all.iter().map(perm_multiplicity).sum();
            assert_eq!(total, double_factorial_odd(size));
            assert_eq!(pairings.len() as u64, total);
        }
    }

    /// Independent Wick evaluation: sum over pairings of the 2m slots and over
    /// all index assignments.
    fn wick_brute(mats: &[DMatrix<f64>], times: &[f64]) -> f64 {
        let m = mats.len();
        let n = mats[0].nrows();
        let slots: Vec<usize> = (0..2 * m).collect();
        let mut total = 0.0;
        for pi in enumerate_p2(&slots).unwrap() {
            let mut w = 1.0;
            for &(a, b) in pi.pairs() {
                w *= (-(times[a / 2] - times[b / 2]).abs()).exp() / n as f64;
            }
            let mut idx = vec![0usize; 2 * m];
            let mut sum = 0.0;
            loop {
                if pi.pairs().iter().all(|&(a, b)| idx[a] == idx[b]) {
                    sum += (0..m).map(|i| mats[i][(idx[2 * i], idx[2 * i + 1])]).product::<f64>();
                }
                let mut p = 0;
                while p < 2 * m {
                    idx[p] += 1;
                    if idx[p] < n {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == 2 * m {
                    break;
                }
            }
            total += w * sum;
        }
        total
    }

    #[test]
    fn perm_expansion_matches_wick() {
        let sym = |seed: f64| DMatrix::from_fn(3, 3, |i, j| ((i + j) as f64 * seed).sin() + (i * j) as f64 * 0.1);
        let mats = vec![sym(0.7), sym(1.3), sym(-0.4)];
        let times = [0.0, 0.2, 0.5];
        let lhs = perm_expansion_moment(&mats, &times).unwrap();
        let rhs = wick_brute(&mats, &times);
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }

    #[test]
    fn limiting_moment_examples() {
        let c = limiting_joint_moment(&[(5, 0.0), (5, 0.3)], &[]).unwrap();
        assert_relative_eq!(c, 2.0 * (-9.0f64 * 0.3).exp());
        assert_eq!(limiting_joint_moment(&[(2, 0.0)], &[]).unwrap(), 0.0);
        assert_eq!(
            limiting_joint_moment(&[(1, 0.0), (1, 0.5), (2, 0.0)], &[]).unwrap(),
            0.0
        );
        assert_relative_eq!(
            limiting_joint_moment(&[(1, 0.1), (1, 0.1)], &[(1, 0.4), (1, 0.4)]).unwrap(),
            4.0
        );
        // fourth moment of N(0,2) is 3·2²
        assert_relative_eq!(limiting_joint_moment(&[(3, 0.2); 4], &[]).unwrap(), 12.0);
        let b = limiting_joint_moment(&[], &[(2, 0.0), (2, 0.25)]).unwrap();
        assert_relative_eq!(b, 2.0 * (-1.0f64).exp());
        assert!(limiting_joint_moment(&[(0, 0.0)], &[]).is_err());
    }
}

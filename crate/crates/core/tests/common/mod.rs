//! Reference computations for the integration tests. They share no code
//! with the library beyond the group generators handed in.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

pub fn pow(base: u64, exp: u32) -> u64 {
    (0..exp).fold(1, |acc, _| acc * base)
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut out = 1;
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}

pub fn power_of(n: u64, p: u64) -> Option<u32> {
    let mut m = 1;
    for r in 0..64 {
        if m == n {
            return Some(r);
        }
        m = m.checked_mul(p)?;
        if m > n {
            return None;
        }
    }
    None
}

/// The four closed forms applied by hand: [n/p]; 2; n^2/p - n + 1; p^e (n - p^e) - n + 1.
pub fn ed_by_hand(n: u64, p: u64) -> u64 {
    if !n.is_multiple_of(p) {
        n / p
    } else if n == p {
        2
    } else if power_of(n, p).is_some() {
        n * n / p - n + 1
    } else {
        let pe = p_part(n, p);
        pe * (n - pe) - n + 1
    }
}

/// `result[g(i)] = v[i]` with `g` given by 0-based images.
pub fn act(g: &[usize], v: &[i64]) -> Vec<i64> {
    let mut out = vec![0; v.len()];
    for (i, &x) in v.iter().enumerate() {
        out[g[i]] = x;
    }
    out
}

pub fn compose(g: &[usize], h: &[usize]) -> Vec<usize> {
    h.iter().map(|&x| g[x]).collect()
}

/// All elements of the group generated by `gens` on `n` points.
pub fn group_elements(gens: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(g, &x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// Zero-sum vectors of `(Z/q)^n`, entries in `0..q`, in lexicographic order.
pub fn torsion_elements(n: usize, q: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![0i64; n];
    loop {
        if v.iter().sum::<i64>() % q == 0 {
            out.push(v.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            v[k] += 1;
            if v[k] < q {
                break;
            }
            v[k] = 0;
        }
    }
}

/// Size of the subgroup of `(Z/q)^n` generated by `set`.
pub fn generated_size(set: &[Vec<i64>], n: usize, q: i64) -> usize {
    let zero = vec![0i64; n];
    let mut seen = BTreeSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for s in set {
            let y: Vec<i64> = x.iter().zip(s).map(|(a, b)| (a + b).rem_euclid(q)).collect();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

pub fn generates(set: &[Vec<i64>], n: usize, q: i64) -> bool {
    generated_size(set, n, q) == (q as usize).pow(n as u32 - 1)
}

/// Orbits of the group on `elements`, as index lists.
pub fn orbits(elements: &[Vec<i64>], gens: &[Vec<usize>], q: i64) -> Vec<Vec<usize>> {
    let index: HashMap<&Vec<i64>, usize> = elements.iter().enumerate().map(|(k, v)| (v, k)).collect();
    let mut owner = vec![false; elements.len()];
    let mut out = Vec::new();
    for start in 0..elements.len() {
        if owner[start] {
            continue;
        }
        owner[start] = true;
        let mut orbit = vec![start];
        let mut k = 0;
        while k < orbit.len() {
            for g in gens {
                let image: Vec<i64> =
                    act(g, &elements[orbit[k]]).into_iter().map(|x| x.rem_euclid(q)).collect();
                let j = index[&image];
                if !owner[j] {
                    owner[j] = true;
                    orbit.push(j);
                }
            }
            k += 1;
        }
        out.push(orbit);
    }
    out
}

/// Smallest invariant generating subset, by trying every union of orbits in
/// order of size.
pub fn min_by_orbit_unions(n: usize, q: i64, gens: &[Vec<usize>]) -> usize {
    let elements = torsion_elements(n, q);
    let orbits = orbits(&elements, gens, q);
    assert!(orbits.len() <= 24, "too many orbits for the exhaustive oracle");
    let mut masks: Vec<(usize, u32)> = (0u32..1 << orbits.len())
        .map(|m| {
            let size = (0..orbits.len()).filter(|k| m >> k & 1 == 1).map(|k| orbits[k].len()).sum();
            (size, m)
        })
        .collect();
    masks.sort();
    for (size, m) in masks {
        let set: Vec<Vec<i64>> = (0..orbits.len())
            .filter(|k| m >> k & 1 == 1)
            .flat_map(|k| orbits[k].iter().map(|&i| elements[i].clone()))
            .collect();
        if generates(&set, n, q) {
            return size;
        }
    }
    unreachable!("the whole lattice generates itself")
}

/// Smallest invariant generating subset over all subsets of `X_n`.
pub fn min_by_all_subsets(n: usize, q: i64, gens: &[Vec<usize>]) -> usize {
    let elements = torsion_elements(n, q);
    assert!(elements.len() <= 16);
    let index: HashMap<&Vec<i64>, usize> = elements.iter().enumerate().map(|(k, v)| (v, k)).collect();
    let mut best = usize::MAX;
    for m in 0u32..1 << elements.len() {
        let size = m.count_ones() as usize;
        if size >= best {
            continue;
        }
        let members: Vec<usize> = (0..elements.len()).filter(|k| m >> k & 1 == 1).collect();
        let invariant = members.iter().all(|&k| {
            gens.iter().all(|g| {
                let image: Vec<i64> = act(g, &elements[k]).into_iter().map(|x| x.rem_euclid(q)).collect();
                m >> index[&image] & 1 == 1
            })
        });
        if !invariant {
            continue;
        }
        let set: Vec<Vec<i64>> = members.iter().map(|&k| elements[k].clone()).collect();
        if generates(&set, n, q) {
            best = size;
        }
    }
    best
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rank over `Q` by fraction-free elimination.
pub fn rank(mut rows: Vec<Vec<i128>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        for i in r + 1..rows.len() {
            let (a, b) = (rows[r][c], rows[i][c]);
            if b == 0 {
                continue;
            }
            let new: Vec<i128> = (0..cols).map(|j| a * rows[i][j] - b * rows[r][j]).collect();
            let g = new.iter().fold(0, |g, &x| gcd(g, x)).max(1);
            rows[i] = new.into_iter().map(|x| x / g).collect();
        }
        r += 1;
    }
    r
}

/// Whether the permutation `pi` of the weights (`weights[k] -> weights[pi[k]]`)
/// fixes every relation `sum c_k weights[k] = 0` in `Z^n`.
///
/// The relations are the annihilator of the row space of the entry matrix,
/// so `pi` fixes them all iff each `e_k - e_pi(k)` lies in that row space.
pub fn acts_trivially_on_relations(weights: &[Vec<i64>], pi: &[usize]) -> bool {
    let n = weights.first().map_or(0, Vec::len);
    let base: Vec<Vec<i128>> =
        (0..n).map(|i| weights.iter().map(|w| w[i] as i128).collect()).collect();
    let r0 = rank(base.clone());
    (0..weights.len()).filter(|&k| pi[k] != k).all(|k| {
        let mut extra = vec![0i128; weights.len()];
        extra[k] += 1;
        extra[pi[k]] -= 1;
        let mut rows = base.clone();
        rows.push(extra);
        rank(rows) == r0
    })
}

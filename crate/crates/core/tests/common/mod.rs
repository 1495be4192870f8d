#![allow(dead_code)]

use std::cmp::Ordering;

use ccc_core::lattice::LatticeMap;
use ccc_core::{Fan, FanMorphism, Int, IntMatrix};
use num_integer::Integer;
use rand::Rng;

fn upper(v: &(i64, i64)) -> bool {
    v.1 > 0 || (v.1 == 0 && v.0 > 0)
}

/// Counterclockwise order starting from the positive x-axis.
pub fn angle_cmp(a: &(i64, i64), b: &(i64, i64)) -> Ordering {
    match (upper(a), upper(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => 0.cmp(&(a.0 * b.1 - a.1 * b.0)),
    }
}

pub fn random_direction<R: Rng>(rng: &mut R, bound: i64) -> (i64, i64) {
    loop {
        let v = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        if v != (0, 0) && v.0.gcd(&v.1) == 1 {
            return v;
        }
    }
}

fn vec2(v: (i64, i64)) -> Vec<Int> {
    vec![Int::from(v.0), Int::from(v.1)]
}

pub fn random_fan<R: Rng>(rng: &mut R, rank: usize) -> Fan {
    match rank {
        0 => Fan::zero(0),
        1 => {
            let mut cones = Vec::new();
            for s in [1i64, -1] {
                if rng.gen_bool(0.6) {
                    cones.push(vec![vec![Int::from(s)]]);
                }
            }
            if cones.is_empty() {
                Fan::zero(1)
            } else {
                Fan::from_rays(1, &cones).unwrap()
            }
        }
        _ => {
            let k = rng.gen_range(1..=5);
            let mut dirs: Vec<(i64, i64)> = (0..k).map(|_| random_direction(rng, 3)).collect();
            dirs.sort_by(angle_cmp);
            dirs.dedup();
            let full = rng.gen_bool(0.5);
            let mut cones = Vec::new();
            let mut used = vec![false; dirs.len()];
            for i in 0..dirs.len() {
                let j = (i + 1) % dirs.len();
                let (a, b) = (dirs[i], dirs[j]);
                if i != j && a.0 * b.1 - a.1 * b.0 > 0 && (full || rng.gen_bool(0.5)) {
                    cones.push(vec![vec2(a), vec2(b)]);
                    used[i] = true;
                    used[j] = true;
                }
            }
            for (d, u) in dirs.iter().zip(&used) {
                if !u && rng.gen_bool(0.7) {
                    cones.push(vec![vec2(*d)]);
                }
            }
            if cones.is_empty() {
                Fan::zero(2)
            } else {
                Fan::from_rays(2, &cones).unwrap()
            }
        }
    }
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<Int>> = (0..rows)
        .map(|_| (0..cols).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect())
        .collect();
    IntMatrix::from_rows(data, cols).unwrap()
}

/// A random fan morphism between fans of rank at most two.
pub fn random_fan_morphism<R: Rng>(rng: &mut R) -> FanMorphism {
    loop {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=2);
        let source = random_fan(rng, n);
        let mut target = random_fan(rng, m);
        if rng.gen_bool(0.5) {
            target = ccc_core::complete_fan(&target).unwrap().0;
        }
        let map = LatticeMap::new(random_matrix(rng, m, n, 2));
        if let Ok(f) = FanMorphism::new(map, source, target) {
            return f;
        }
    }
}

//! Permutation orbits and small matrix-group closures.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linspaces::{mat_mul, Matrix};

/// Orbit label of every element under the group generated by `perms`;
/// orbits are numbered in order of their least element.
pub fn orbit_labels(n: usize, perms: &[&[u32]]) -> Vec<u32> {
    let mut label = vec![u32::MAX; n];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start] != u32::MAX {
            continue;
        }
        label[start] = next;
        stack.push(start as u32);
        while let Some(x) = stack.pop() {
            for p in perms {
                let y = p[x as usize];
                if label[y as usize] == u32::MAX {
                    label[y as usize] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// Orbits as sorted member lists, in label order.
pub fn orbits_from_labels(labels: &[u32]) -> Vec<Vec<u32>> {
    let count = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut out = vec![Vec::new(); count];
    for (i, &l) in labels.iter().enumerate() {
        out[l as usize].push(i as u32);
    }
    out
}

/// All elements of the matrix group generated by `gens` (linear maps only),
/// failing once more than `limit` elements are found.
pub fn matrix_group_closure(f: &Field, gens: &[Matrix], limit: usize) -> Result<HashSet<Matrix>> {
    let Some(first) = gens.first() else {
        return Ok(HashSet::new());
    };
    let id = crate::linspaces::identity(first.len());
    let mut seen: HashSet<Matrix> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for g in gens {
            let p = mat_mul(f, &m, g);
            if seen.insert(p.clone()) {
                if seen.len() > limit {
                    return Err(Error::Limit(format!("group has more than {limit} elements")));
                }
                queue.push_back(p);
            }
        }
    }
    Ok(seen)
}

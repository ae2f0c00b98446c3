//! Small rooted preorders, one per isomorphism class, in canonical order.

use crate::compiled::SmallFrame;
use std::sync::OnceLock;

/// Largest world count the canonical search enumerates.
pub const MAX_SEARCH_WORLDS: usize = 6;

/// Every labelled preorder on `0..n`, as up rows.
fn labelled_preorders(max: usize) -> Vec<Vec<Vec<u64>>> {
    let mut levels: Vec<Vec<Vec<u64>>> = vec![vec![vec![]]];
    for n in 1..=max {
        let x = n - 1;
        let mut next = Vec::new();
        for up in &levels[n - 1] {
            let mut down = vec![0u64; x];
            for (i, row) in up.iter().enumerate() {
                for (j, d) in down.iter_mut().enumerate() {
                    if row >> j & 1 == 1 {
                        *d |= 1 << i;
                    }
                }
            }
            let up_closed = |s: u64| (0..x).all(|u| s >> u & 1 == 0 || up[u] & !s == 0);
            let down_closed = |s: u64| (0..x).all(|d| s >> d & 1 == 0 || down[d] & !s == 0);
            let ups: Vec<u64> = (0..1u64 << x).filter(|&s| up_closed(s)).collect();
            let downs: Vec<u64> = (0..1u64 << x).filter(|&s| down_closed(s)).collect();
            for &u in &ups {
                for &d in &downs {
                    if (0..x).any(|w| d >> w & 1 == 1 && u & !up[w] != 0) {
                        continue;
                    }
                    let mut rows: Vec<u64> =
                        up.iter().enumerate().map(|(w, &r)| r | ((d >> w & 1) << x)).collect();
                    rows.push(u | 1 << x);
                    next.push(rows);
                }
            }
        }
        levels.push(next);
    }
    levels
}

/// Bits for the off-diagonal pairs in lexicographic order, first pair most
/// significant, so that smaller keys come first in the canonical order.
fn key(up: &[u64]) -> u64 {
    let n = up.len();
    let mut k = 0u64;
    for (i, row) in up.iter().enumerate() {
        for j in (0..n).filter(|&j| j != i) {
            k = k << 1 | (row >> j & 1);
        }
    }
    k
}

fn permute(up: &[u64], perm: &[usize]) -> Vec<u64> {
    let n = up.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if up[i] >> j & 1 == 1 {
                out[perm[i]] |= 1 << perm[j];
            }
        }
    }
    out
}

/// Permutations of `0..n` fixing 0.
fn root_fixing_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..left.len() {
            let x = left.remove(i);
            prefix.push(x);
            go(prefix, left, out);
            prefix.pop();
            left.insert(i, x);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    go(&mut vec![0], &mut (1..n).collect(), &mut out);
    out
}

fn build() -> Vec<Vec<SmallFrame>> {
    let levels = labelled_preorders(MAX_SEARCH_WORLDS);
    let mut out = vec![Vec::new()];
    for (n, level) in levels.iter().enumerate().skip(1) {
        let perms = root_fixing_perms(n);
        let full = (1u64 << n) - 1;
        let mut reps: Vec<(u64, Vec<u64>)> = level
            .iter()
            .filter(|up| up[0] == full)
            .filter_map(|up| {
                let k = key(up);
                perms.iter().all(|p| key(&permute(up, p)) >= k).then(|| (k, up.clone()))
            })
            .collect();
        reps.sort();
        out.push(reps.into_iter().map(|(_, up)| SmallFrame::from_up(up)).collect());
    }
    out
}

fn all() -> &'static [Vec<SmallFrame>] {
    static FRAMES: OnceLock<Vec<Vec<SmallFrame>>> = OnceLock::new();
    FRAMES.get_or_init(build)
}

/// Rooted preorders on `n` worlds with root 0, one per isomorphism class.
pub(crate) fn rooted(n: usize) -> &'static [SmallFrame] {
    all().get(n).map(Vec::as_slice).unwrap_or(&[])
}

/// Whether some world is seen from every world.
pub(crate) fn has_top(f: &SmallFrame) -> bool {
    f.up.iter().fold((1u64 << f.n) - 1, |acc, &r| acc & r) != 0
}

//! Named built-in groups usable directly from the config format.

use std::sync::Arc;

use super::{Elem, FiniteGroup};

/// Cyclic group of order `n` with elements `e, r, r2, ...`.
pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
    let mut table = vec![0 as Elem; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = ((a + b) % n) as Elem;
        }
    }
    let names = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "r".to_string(),
            _ => format!("r{k}"),
        })
        .collect();
    FiniteGroup::from_table(n, table, Some(names)).expect("cyclic table is a group")
}

/// Klein four-group with elements `e, a, b, ab`.
pub fn klein_four() -> Arc<FiniteGroup> {
    let mut table = vec![0 as Elem; 16];
    for a in 0..4 {
        for b in 0..4 {
            table[a * 4 + b] = (a ^ b) as Elem;
        }
    }
    let names = vec!["e".into(), "a".into(), "b".into(), "ab".into()];
    FiniteGroup::from_table(4, table, Some(names)).expect("xor table is a group")
}

/// Symmetric group on 3 points, generated by `(0 1)` and `(0 1 2)`.
pub fn symmetric_3() -> Arc<FiniteGroup> {
    FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], 8)
        .expect("S3 closes under composition")
}

/// Dihedral group of the square, generated by the rotation `(0 1 2 3)`
/// and the reflection `(1 3)`.
pub fn dihedral_4() -> Arc<FiniteGroup> {
    FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]], 10)
        .expect("D4 closes under composition")
}

/// Quaternion group `{1, -1, i, -i, j, -j, k, -k}` in that element order.
pub fn quaternion() -> Arc<FiniteGroup> {
    // Element k: sign = k & 1, unit = k >> 1 in (1, i, j, k).
    // Unit multiplication with result sign.
    const UNIT_MUL: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mut table = vec![0 as Elem; 64];
    for a in 0..8 {
        for b in 0..8 {
            let (ua, sa) = (a >> 1, a & 1 == 1);
            let (ub, sb) = (b >> 1, b & 1 == 1);
            let (u, neg) = UNIT_MUL[ua][ub];
            let sign = (sa ^ sb) ^ neg;
            table[a * 8 + b] = ((u << 1) | usize::from(sign)) as Elem;
        }
    }
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table(8, table, Some(names)).expect("quaternion table is a group")
}

/// Look up a group by its built-in name.
pub fn builtin_group(name: &str) -> Option<Arc<FiniteGroup>> {
    match name {
        "Z1" => Some(FiniteGroup::trivial()),
        "Z2" => Some(cyclic(2)),
        "Z3" => Some(cyclic(3)),
        "Z4" => Some(cyclic(4)),
        "Z6" => Some(cyclic(6)),
        "Z2xZ2" => Some(klein_four()),
        "S3" => Some(symmetric_3()),
        "Q8" => Some(quaternion()),
        "D4" => Some(dihedral_4()),
        _ => None,
    }
}

/// Names accepted by [`builtin_group`], in documentation order.
pub const BUILTIN_GROUP_NAMES: [&str; 9] =
    ["Z1", "Z2", "Z3", "Z4", "Z6", "Z2xZ2", "S3", "Q8", "D4"];

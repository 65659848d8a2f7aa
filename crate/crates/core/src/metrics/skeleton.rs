//! Zhang–Suen thinning.

use crate::patch::BinaryMask;

/// Neighbours P2..P9, clockwise from north.
const RING: [(isize, isize); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

/// Thins a mask to an 8-connected, one-pixel-wide skeleton.
///
/// Pixels outside the image count as background. The result is a subset of
/// the input and a fixed point of the thinning, so applying it twice changes
/// nothing.
pub fn skeletonize(m: &BinaryMask) -> BinaryMask {
    let mut cur = m.clone();
    let mut doomed = Vec::new();
    loop {
        let mut changed = false;
        for pass in 0..2 {
            doomed.clear();
            for y in 0..cur.height() {
                for x in 0..cur.width() {
                    if cur.get(x, y) && deletable(&cur, x as isize, y as isize, pass) {
                        doomed.push((x, y));
                    }
                }
            }
            changed |= !doomed.is_empty();
            for &(x, y) in &doomed {
                cur.set(x, y, false);
            }
        }
        if !changed {
            return cur;
        }
    }
}

fn deletable(m: &BinaryMask, x: isize, y: isize, pass: usize) -> bool {
    let p: [bool; 8] = RING.map(|(dx, dy)| m.get_or_false(x + dx, y + dy));
    let b = p.iter().filter(|&&v| v).count();
    if !(2..=6).contains(&b) {
        return false;
    }
    let a = (0..8).filter(|&k| !p[k] && p[(k + 1) % 8]).count();
    if a != 1 {
        return false;
    }
    let (p2, p4, p6, p8) = (p[0], p[2], p[4], p[6]);
    if pass == 0 {
        !(p2 && p4 && p6) && !(p4 && p6 && p8)
    } else {
        !(p2 && p4 && p8) && !(p2 && p6 && p8)
    }
}

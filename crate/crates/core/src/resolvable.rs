//! Resolvable designs found by exact cover: parallel classes of an STS and
//! partitions of an SQS into S(2,4,v) designs.

use crate::design::{binomial, Design};
use crate::error::{Error, Result};
use crate::exact_cover::ExactCover;
use crate::flow::Resolution;
use crate::sqs::check_two_partition;

/// The affine plane of order 3 as an STS(9), point `(x, y)` at `3x + y`.
pub fn affine_sts9() -> Design {
    let mut blocks = Vec::new();
    for x in 0..3 {
        blocks.push((0..3).map(|y| 3 * x + y).collect());
    }
    for m in 0..3 {
        for c in 0..3 {
            blocks.push((0..3).map(|x| 3 * x + (m * x + c) % 3).collect());
        }
    }
    Design::sts(9, blocks).expect("affine plane is well formed")
}

/// The planes of `AG(m, 2)`: 4-sets `{a, b, c, d}` with `a ^ b ^ c ^ d = 0`,
/// an SQS(2^m).
pub fn boolean_sqs(m: u32) -> Result<Design> {
    if !(2..=8).contains(&m) {
        return Err(Error::precondition(format!("boolean SQS(2^m) built for 2 <= m <= 8, got m = {m}")));
    }
    let v = 1usize << m;
    let mut blocks = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            for c in b + 1..v {
                let d = a ^ b ^ c;
                if d > c {
                    blocks.push(vec![a, b, c, d]);
                }
            }
        }
    }
    Design::sqs(v, blocks)
}

/// Partition of the blocks into parallel classes (every point once per
/// class), with the blocks through point 0 seeding the classes.
pub fn find_parallel_resolution(d: &Design, budget: u64) -> Result<Option<Resolution>> {
    let (v, k) = (d.v(), d.k());
    if v == 0 || v % k != 0 || d.b() % (v / k) != 0 {
        return Ok(None);
    }
    let rho = d.b() / (v / k);
    let items = d.b() + v * rho;
    let mut options = Vec::with_capacity(d.b() * rho);
    for (j, block) in d.blocks().iter().enumerate() {
        for c in 0..rho {
            let mut opt = vec![j];
            opt.extend(block.iter().map(|&p| d.b() + p * rho + c));
            options.push(opt);
        }
    }
    let seeds: Vec<usize> = d.blocks().iter().enumerate().filter(|(_, b)| b.contains(&0)).map(|(j, _)| j).collect();
    if seeds.len() != rho {
        return Ok(None);
    }
    let mut dl = ExactCover::new(items, &options);
    dl.preselect(&seeds.iter().enumerate().map(|(c, &j)| j * rho + c).collect::<Vec<_>>());
    let Some(chosen) = dl.solve(budget, "parallel-class resolution")? else {
        return Ok(None);
    };
    let mut classes = vec![Vec::new(); rho];
    for o in seeds.iter().enumerate().map(|(c, &j)| j * rho + c).chain(chosen) {
        classes[o % rho].push(o / rho);
    }
    for class in &mut classes {
        class.sort_unstable();
    }
    Resolution::new(d, 1, classes).map(Some)
}

/// Partition of an SQS(v) into `(v-2)/2` S(2,4,v) designs, with the blocks
/// through `{0, 1}` seeding the classes.
pub fn find_two_partition(q: &Design, budget: u64) -> Result<Option<Vec<Vec<usize>>>> {
    let v = q.v();
    if !q.is_sqs() || v % 12 != 4 {
        return Err(Error::precondition(format!("a 2-partitionable SQS(v) needs v ≡ 4 (mod 12), got {v}")));
    }
    let classes = (v - 2) / 2;
    let pair = |a: usize, b: usize| binomial(b, 2) + a;
    let items = q.b() + binomial(v, 2) * classes;
    let mut options = Vec::with_capacity(q.b() * classes);
    for (j, block) in q.blocks().iter().enumerate() {
        for c in 0..classes {
            let mut opt = vec![j];
            for x in 0..4 {
                for y in x + 1..4 {
                    opt.push(q.b() + pair(block[x], block[y]) * classes + c);
                }
            }
            options.push(opt);
        }
    }
    let seeds: Vec<usize> =
        q.blocks().iter().enumerate().filter(|(_, b)| b[0] == 0 && b[1] == 1).map(|(j, _)| j).collect();
    let seed_options: Vec<usize> = seeds.iter().enumerate().map(|(c, &j)| j * classes + c).collect();
    let mut dl = ExactCover::new(items, &options);
    dl.preselect(&seed_options);
    let Some(chosen) = dl.solve(budget, "SQS 2-partition")? else {
        return Ok(None);
    };
    let mut out = vec![Vec::new(); classes];
    for o in seed_options.into_iter().chain(chosen) {
        out[o % classes].push(o / classes);
    }
    for class in &mut out {
        class.sort_unstable();
    }
    check_two_partition(q, &out)?;
    Ok(Some(out))
}

//! Enumeration of set partitions of `{0, ..., n-1}`.
//!
//! Free cumulants and the partition-sum oracle both range over
//! noncrossing partitions; the enumeration here goes through restricted
//! growth strings and filters, which is entirely adequate for the small
//! sizes the moment computations need.

/// All set partitions of `{0, ..., n-1}`. Blocks are sorted by their
/// least element and each block is ascending. `n = 0` yields the single
/// empty partition.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut assignment = vec![0usize; n];
    grow(&mut assignment, 1, n, &mut out);
    if n == 0 {
        out.push(Vec::new());
    }
    out
}

fn grow(assignment: &mut Vec<usize>, index: usize, n: usize, out: &mut Vec<Vec<Vec<usize>>>) {
    if n == 0 {
        return;
    }
    if index == n {
        let blocks_count = assignment.iter().max().unwrap() + 1;
        let mut blocks = vec![Vec::new(); blocks_count];
        for (elem, &b) in assignment.iter().enumerate() {
            blocks[b].push(elem);
        }
        out.push(blocks);
        return;
    }
    let used = assignment[..index].iter().max().unwrap() + 1;
    for b in 0..=used {
        assignment[index] = b;
        grow(assignment, index + 1, n, out);
    }
    assignment[index] = 0;
}

/// Whether a partition given as blocks of ascending positions is
/// noncrossing: no `a < b < c < d` with `a, c` in one block and `b, d`
/// in another.
pub fn is_noncrossing(blocks: &[Vec<usize>]) -> bool {
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            for pa in a.windows(2) {
                for &q in b.iter() {
                    if pa[0] < q && q < pa[1] && b.iter().any(|&r| r < pa[0] || r > pa[1]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// All noncrossing partitions of `{0, ..., n-1}`.
pub fn noncrossing_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    set_partitions(n)
        .into_iter()
        .filter(|p| is_noncrossing(p))
        .collect()
}

/// All interval partitions of `{0, ..., n-1}`: every block is a run of
/// consecutive integers. Equivalent to compositions of `n`.
pub fn interval_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cuts: Vec<usize> = Vec::new();
    split(0, n, &mut cuts, &mut out);
    out
}

fn split(start: usize, n: usize, blocks: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
    if start == n {
        let mut partition = Vec::new();
        let mut from = 0;
        for &len in blocks.iter() {
            partition.push((from..from + len).collect());
            from += len;
        }
        out.push(partition);
        return;
    }
    for len in 1..=n - start {
        blocks.push(len);
        split(start + len, n, blocks, out);
        blocks.pop();
    }
}

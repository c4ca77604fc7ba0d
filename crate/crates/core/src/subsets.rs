//! Lexicographic enumeration of k-subsets of `0..n`.

/// Iterator over all strictly increasing index lists of length `k` drawn
/// from `0..n`, in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // rightmost position that can still move
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations::new(n, k)
}

/// C(n, k), saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Every nonempty subset of `0..n` with at most `max_len` elements, sorted
/// lexicographically as sequences (so `[0] < [0, 1] < [1]`).
pub fn subsets_lex(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fn walk(start: usize, n: usize, max_len: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        for i in start..n {
            stack.push(i);
            out.push(stack.clone());
            if stack.len() < max_len {
                walk(i + 1, n, max_len, stack, out);
            }
            stack.pop();
        }
    }
    if max_len > 0 {
        walk(0, n, max_len, &mut stack, &mut out);
    }
    out
}

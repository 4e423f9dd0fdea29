//! Koszul signs and unshuffles.

/// Koszul sign of rearranging elements of the given degrees so that
/// position `k` of the result holds the element `perm[k]`.
///
/// Computed by bubble-sorting `perm` into the identity; each adjacent
/// transposition of elements of degrees `p`, `q` contributes `(-1)^{pq}`.
pub fn koszul_sign(degrees: &[i64], perm: &[usize]) -> i64 {
    assert_eq!(degrees.len(), perm.len(), "one degree per element");
    let mut seq = perm.to_vec();
    let mut sign = 1;
    let n = seq.len();
    for pass in 0..n {
        for j in 0..n - 1 - pass {
            if seq[j] > seq[j + 1] {
                if (degrees[seq[j]] * degrees[seq[j + 1]]).rem_euclid(2) == 1 {
                    sign = -sign;
                }
                seq.swap(j, j + 1);
            }
        }
    }
    sign
}

/// All `(i, n-i)` unshuffles in lexicographic order: permutations `s` of
/// `0..n` with `s[0] < ... < s[i-1]` and `s[i] < ... < s[n-1]`.
pub fn unshuffles(i: usize, n: usize) -> Vec<Vec<usize>> {
    assert!(i <= n, "i must not exceed n");
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(i);
    fn rec(start: usize, i: usize, n: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if chosen.len() == i {
            let mut perm = chosen.clone();
            perm.extend((0..n).filter(|k| !chosen.contains(k)));
            out.push(perm);
            return;
        }
        for k in start..n {
            chosen.push(k);
            rec(k + 1, i, n, chosen, out);
            chosen.pop();
        }
    }
    rec(0, i, n, &mut chosen, &mut out);
    out
}

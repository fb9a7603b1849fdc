//! Reference stable sort.

/// Insertion sort by key. Each element only moves past strictly greater keys,
/// which keeps equal keys in input order.
pub fn stable_sort_by_key<T: Clone, K: Ord>(items: &[T], key: impl Fn(&T) -> K) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for item in items {
        let k = key(item);
        let mut pos = out.len();
        while pos > 0 && key(&out[pos - 1]) > k {
            pos -= 1;
        }
        out.insert(pos, item.clone());
    }
    out
}

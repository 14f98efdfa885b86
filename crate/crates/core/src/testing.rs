use crate::graph::PlumbingTree;

pub(crate) use crate::gen::branched_example;

/// A centre `c` with Euler number `euler` and `leaves` leaves of Euler
/// number -2, named a, b, d, e, ...
pub(crate) fn star(euler: i64, leaves: usize) -> PlumbingTree {
    let names: Vec<String> = "abdefghijk".chars().take(leaves).map(String::from).collect();
    let vertices = std::iter::once(("c".to_string(), euler)).chain(names.iter().map(|n| (n.clone(), -2)));
    let edges = names.iter().map(|n| ("c".to_string(), n.clone()));
    PlumbingTree::new(vertices, edges).unwrap()
}

use crate::graph::VertexId;
use crate::spt::ShortestPathTree;

/// Vertices whose removal splits `tree` into pieces of fewer than
/// `ceil(r / 2)` vertices, at most `ceil(2 |T| / r)` of them.
///
/// Bottom-up sweep: each vertex carries the number of uncut vertices in its
/// subtree and is cut once that count reaches `ceil(r / 2)`. `r = 0` behaves
/// like `r = 1` and cuts everything.
pub fn tree_separator(tree: &ShortestPathTree, r: u64) -> Vec<VertexId> {
    let half = r.div_ceil(2).max(1);
    let len = tree.len();
    let mut order: Vec<usize> = (0..len).collect();
    // children lie strictly farther from the root than their parent
    order.sort_unstable_by_key(|&i| std::cmp::Reverse(tree.dist_at(i)));
    let root = tree.position(tree.root());
    let mut residual = vec![1u64; len];
    let mut cut = Vec::new();
    for pos in order {
        if residual[pos] >= half {
            cut.push(tree.vertex_at(pos));
            residual[pos] = 0;
        }
        if Some(pos) != root {
            residual[tree.parent_pos(pos)] += residual[pos];
        }
    }
    cut.sort_unstable();
    cut
}

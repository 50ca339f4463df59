mod common;

#[test]
fn oracle_values() {
    assert_eq!((1..=5).map(common::lie_dimension_oracle).collect::<Vec<_>>(), vec![1, 1, 2, 6, 24]);
    assert_eq!(common::planar_tree_counts(4), vec![1, 5, 5]);
    assert_eq!(common::planar_tree_counts(5), vec![1, 9, 21, 14]);
    assert_eq!(common::ordered_set_partition_counts(3), vec![1, 6, 6]);
}

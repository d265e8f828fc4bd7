//! The printed flow tables, checked directly and against the fixtures.

mod common;

use std::collections::HashMap;

use common::{is_zero_sum, parse_table, t_subsets_each_once, table_map, width};
use steinerflow::design::{derived_design, validate_design};
use steinerflow::flow::{flow_width, verify_zero_sum, FlowAssignment};
use steinerflow::io::{parse_design, parse_flow};

const STS15_FAMILY1: &str = "
0 1 4 -1   0 2 8 1    0 5 10 2
1 2 5 -1   1 3 9 1    1 6 11 2
2 3 6 1    2 4 10 -1  2 7 12 2
3 4 7 -1   3 5 11 -1  3 8 13 2
4 5 8 1    4 6 12 -1  4 9 14 2
5 6 9 -1   5 7 13 -1
6 7 10 1   6 8 14 -1
7 8 11 -1  7 9 0 1
8 9 12 -1  8 10 1 -1
9 10 13 -1 9 11 2 -1
10 11 14 1 10 12 3 -1
11 12 0 -1 11 13 4 1
12 13 1 1  12 14 5 1
13 14 2 -1 13 0 6 -1
14 0 3 -1  14 1 7 -1";

const STS15_FAMILY2: &str = "
0 1 4 1    0 2 9 -1   0 5 10 1
1 2 5 -2   1 3 10 -2  1 6 11 1
2 3 6 1    2 4 11 2   2 7 12 1
3 4 7 -2   3 5 12 1   3 8 13 1
4 5 8 -1   4 6 13 2   4 9 14 -1
5 6 9 -2   5 7 14 2
6 7 10 1   6 8 0 -2
7 8 11 -2  7 9 1 2
8 9 12 1   8 10 2 1
9 10 13 2  9 11 3 -1
10 11 14 -2 10 12 4 -1
11 12 0 1  11 13 5 1
12 13 1 -2 12 14 6 -1
13 14 2 -2 13 0 7 -2
14 0 3 2   14 1 8 2";

// points as printed, 1..8
const SQS8: &str = "
1 2 4 8 1   3 5 6 7 1
2 3 5 8 1   1 4 6 7 1
3 4 6 8 2   1 2 5 7 2
4 5 7 8 -1  1 2 3 6 -1
1 5 6 8 -1  2 3 4 7 -1
2 6 7 8 -1  1 3 4 5 -1
1 3 7 8 -1  2 4 5 6 -1";

// points as printed, 1..9 and 0
const SQS10: &str = "
1 2 4 5 1   1 2 3 7 -1  1 3 5 8 1
2 3 5 6 -1  2 3 4 8 1   2 4 6 9 -1
3 4 6 7 1   3 4 5 9 -1  3 5 7 0 1
4 5 7 8 -1  4 5 6 0 1   1 4 6 8 -1
5 6 8 9 1   1 5 6 7 -1  2 5 7 9 1
6 7 9 0 -1  2 6 7 8 1   3 6 8 0 -1
1 7 8 0 1   3 7 8 9 -1  1 4 7 9 1
1 2 8 9 -1  4 8 9 0 1   2 5 8 0 -1
2 3 9 0 1   1 5 9 0 -1  1 3 6 9 1
1 3 4 0 -1  1 2 6 0 1   2 4 7 0 -1";

fn fixture(name: &str) -> (String, String) {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/");
    (
        std::fs::read_to_string(format!("{dir}{name}.design.json")).unwrap(),
        std::fs::read_to_string(format!("{dir}{name}.flow.json")).unwrap(),
    )
}

/// Loads a fixture and returns its blocks in printed labels with flow values.
fn fixture_table(name: &str) -> HashMap<Vec<usize>, i64> {
    let (dt, ft) = fixture(name);
    let doc = parse_design(&dt).unwrap();
    let flow = parse_flow(&ft, &doc.design).unwrap();
    let label = |p: usize| match &doc.labels {
        Some(l) => l[p].parse::<usize>().unwrap(),
        None => p,
    };
    let blocks: Vec<Vec<usize>> = doc.design.blocks().iter().map(|b| b.iter().map(|&p| label(p)).collect()).collect();
    table_map(&blocks, flow.values())
}

fn check_table(text: &str, k: usize, v: usize, t: usize, expect_width: u64, relabel: impl Fn(usize) -> usize) {
    let (blocks, values) = parse_table(text, k);
    let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.iter().map(|&p| relabel(p)).collect()).collect();
    t_subsets_each_once(v, t, &blocks).unwrap();
    assert!(is_zero_sum(v, &blocks, &values));
    assert_eq!(width(&values), expect_width);
}

#[test]
fn printed_tables_are_flows() {
    check_table(STS15_FAMILY1, 3, 15, 2, 3, |p| p);
    check_table(STS15_FAMILY2, 3, 15, 2, 3, |p| p);
    check_table(SQS8, 4, 8, 3, 3, |p| p - 1);
    check_table(SQS10, 4, 10, 3, 2, |p| p);
}

#[test]
fn fixtures_match_printed_tables() {
    for (name, text, k) in [
        ("sts15_family1", STS15_FAMILY1, 3),
        ("sts15_family2", STS15_FAMILY2, 3),
        ("sqs8", SQS8, 4),
        ("sqs10", SQS10, 4),
    ] {
        let (blocks, values) = parse_table(text, k);
        assert_eq!(fixture_table(name), table_map(&blocks, &values), "{name}");
    }
}

#[test]
fn fixture_flows_verify_with_library() {
    for (name, w) in [("sts15_family1", 3), ("sts15_family2", 3), ("sqs8", 3), ("sqs10", 2)] {
        let (dt, ft) = fixture(name);
        let doc = parse_design(&dt).unwrap();
        assert!(validate_design(&doc.design).valid, "{name}");
        let flow = parse_flow(&ft, &doc.design).unwrap();
        assert!(verify_zero_sum(&doc.design, &flow).unwrap().ok, "{name}");
        assert_eq!(flow_width(&flow), w, "{name}");
    }
}

#[test]
fn derived_sts9_of_sqs10_keeps_a_two_flow() {
    let (dt, ft) = fixture("sqs10");
    let doc = parse_design(&dt).unwrap();
    let flow = parse_flow(&ft, &doc.design).unwrap();
    let zero = doc.labels.as_ref().unwrap().iter().position(|l| l == "0").unwrap();
    let derived = derived_design(&doc.design, zero).unwrap();
    assert_eq!((derived.v(), derived.b()), (9, 12));
    assert!(validate_design(&derived).valid);
    let through: Vec<i64> = doc
        .design
        .blocks()
        .iter()
        .zip(flow.values())
        .filter(|(b, _)| b.contains(&zero))
        .map(|(_, &x)| x)
        .collect();
    // derived blocks keep the order of the blocks through the point
    let f = FlowAssignment::from_origin_order(&derived, &through).unwrap();
    assert!(verify_zero_sum(&derived, &f).unwrap().ok);
    assert_eq!(flow_width(&f), 2);

    // oracle: the printed table with 0 deleted
    let (blocks, values) = parse_table(SQS10, 4);
    let (dblocks, dvalues): (Vec<Vec<usize>>, Vec<i64>) = blocks
        .iter()
        .zip(&values)
        .filter(|(b, _)| b.contains(&0))
        .map(|(b, &x)| (b.iter().filter(|&&p| p != 0).map(|&p| p - 1).collect(), x))
        .unzip();
    t_subsets_each_once(9, 2, &dblocks).unwrap();
    assert!(is_zero_sum(9, &dblocks, &dvalues));
}

//! Replays of hand-worked control parts with scripted random choices.

use augsched::graph::{augmentation_gain, AugKind};
use augsched::protocol::{apply_switch_decisions, run_control_part_with, verify_outcome};
use augsched::QueueVector;

mod common;
use common::*;

#[test]
fn example1_single_augmentation() {
    let (g, base) = example1();
    // q(ab)=2 q(bc)=4 q(cd)=1 q(de)=5
    let q = QueueVector::new(vec![2, 4, 1, 5, 3, 3]);
    let out = run_control_part_with(&g, &q, &base, 2, &mut example1_choices()).unwrap();

    assert_eq!(out.trace.to_text(), EXAMPLE1_TRACE);
    assert_eq!(out.trace.phase_count(), 10);
    assert_eq!(out.augmentations.len(), 1);
    let aug = &out.augmentations[0];
    assert_eq!(aug.links, vec![0, 1, 2, 3]);
    assert_eq!(aug.terminus, Some(4));
    assert!(!aug.closed);
    // e has no base link to add, so it stops in phase 5
    assert_eq!(out.trace.phases[4].terminated, vec![4]);
    assert_eq!(aug.running_gain, 4 + 5 - 2 - 1);
    assert_eq!(augmentation_gain(&aug.augmentation(), &base, &q).unwrap(), aug.running_gain);
    assert!(aug.switched());
    assert_eq!(out.new_matching.to_vec(), vec![1, 3]);
    verify_outcome(&g, &q, &base, 2, &out).unwrap();
}

#[test]
fn example1_switch_iff_positive_gain() {
    let (g, base) = example1();
    for (q_ab, q_bc, q_cd, q_de) in [(2, 4, 1, 5), (5, 2, 1, 4), (3, 3, 3, 3), (0, 1, 0, 0), (9, 0, 9, 0)] {
        let q = QueueVector::new(vec![q_ab, q_bc, q_cd, q_de, 0, 0]);
        let out = run_control_part_with(&g, &q, &base, 2, &mut example1_choices()).unwrap();
        let gain = q_bc as i64 + q_de as i64 - q_ab as i64 - q_cd as i64;
        assert_eq!(out.augmentations[0].switched(), gain > 0, "q = {q:?}");
        let expect = if gain > 0 { vec![1, 3] } else { vec![0, 2] };
        assert_eq!(out.new_matching.to_vec(), expect);
    }
}

#[test]
fn example2_contention() {
    let (g, base, q) = example2();
    let out = run_control_part_with(&g, &q, &base, 2, &mut example2_choices()).unwrap();
    assert_eq!(out.trace.to_text(), EXAMPLE2_TRACE);
    assert_eq!(out.trace.phase_count(), 10);

    // phase 1: four seeds, four distinct targets, four new active nodes
    assert!(out.trace.phases[0].collided.is_empty());
    assert_eq!(out.trace.phases[0].active_after, vec![1, 5, 10, 12]);
    // phase 2: two REQs collide at node 13
    assert_eq!(out.trace.phases[1].collided, vec![10, 12]);
    assert_eq!(out.trace.phases[1].active_after, vec![2, 6]);
    // phase 4: node 3 REQs its own seed, which is used
    assert_eq!(out.trace.phases[3].rejected, vec![3]);
    assert_eq!(out.trace.phases[3].active_after, vec![8]);
    // phase 5: node 8 would exceed the intended size and stops
    assert_eq!(out.trace.phases[4].terminated, vec![8]);
    assert!(out.trace.phases[4].messages.is_empty());

    let augs = &out.augmentations;
    assert_eq!(augs.len(), 4);
    // seed 0's augmentation closes into a cycle at termination
    assert!(augs[0].closed);
    assert_eq!(augs[0].links, vec![0, 1, 2, 3]);
    assert_eq!(augs[0].augmentation().kind(), AugKind::Cycle);
    assert_eq!(augs[0].nonbase_count, 2);
    assert_eq!(augs[1].links, vec![4, 5, 6, 7]);
    assert_eq!(augs[1].nonbase_count, augs[1].intended_size);
    assert_eq!(augs[2].links, vec![8]);
    assert_eq!(augs[3].links, vec![9]);
    assert!(augs[2..].iter().all(|a| !a.closed));

    let switched: Vec<usize> = augs.iter().filter(|a| a.switched()).map(|a| a.seed).collect();
    assert_eq!(switched, vec![0, 4], "two of the four augmentations switch");
    assert_eq!(out.new_matching.to_vec(), vec![1, 3, 4, 6, 8, 9]);
    assert_eq!(apply_switch_decisions(&g, &base, augs).unwrap(), out.new_matching);
    verify_outcome(&g, &q, &base, 2, &out).unwrap();
}

#[test]
fn example2_weight_accounting() {
    let (g, base, q) = example2();
    let out = run_control_part_with(&g, &q, &base, 2, &mut example2_choices()).unwrap();
    let gains: i64 = out.switched().map(|a| a.running_gain).sum();
    assert_eq!(gains, 8 + 4);
    assert_eq!(out.new_matching.weight(&q) as i64, base.weight(&q) as i64 + gains);
    let per_node = out.trace.transmissions_per_node(g.node_count());
    assert_eq!(per_node[3], 3);
    assert_eq!(per_node[10], 3);
    assert!(per_node.iter().all(|&c| c <= 3));
}

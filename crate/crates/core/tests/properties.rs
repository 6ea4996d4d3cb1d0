use std::collections::BTreeSet;

use asmsim_core::asm_parser::{parse_assembly, segment_basic_blocks, ParserConfig};
use asmsim_core::corpus::{
    admissible_strides, build_grid, enumerate_subsets, GroupingScheme, ProgramEntry,
};
use asmsim_core::features::{
    build_universe, extract_ngrams, from_boolean_vector, to_boolean_vector, NgramMode,
    ProgramFeatures,
};
use proptest::prelude::*;

const PLAIN: [&str; 8] = ["movs", "adds", "ldr", "str", "cmp", "lsls", "bic", "mul"];
const BRANCHES: [&str; 6] = ["b", "beq", "bne", "bl", "cbz", "bgt"];

#[derive(Debug, Clone)]
enum Line {
    Plain(usize),
    Branch(usize, usize),
    Label(usize),
    PopPc,
    Directive,
    Comment,
}

fn line() -> impl Strategy<Value = Line> {
    prop_oneof![
        6 => (0..PLAIN.len()).prop_map(Line::Plain),
        2 => (0..BRANCHES.len(), 0..4usize).prop_map(|(b, l)| Line::Branch(b, l)),
        2 => (0..6usize).prop_map(Line::Label),
        1 => Just(Line::PopPc),
        1 => Just(Line::Directive),
        1 => Just(Line::Comment),
    ]
}

/// Renders a listing; labels 0..4 can be branch targets, 4..6 never are.
fn render(lines: &[Line], label_prefix: &str) -> String {
    let mut defined = BTreeSet::new();
    let mut out = String::new();
    for l in lines {
        match l {
            Line::Plain(i) => out.push_str(&format!("\t{}\tr0, r1\n", PLAIN[*i])),
            Line::Branch(b, t) => out.push_str(&format!("\t{}\t.L{t}\n", BRANCHES[*b])),
            Line::Label(k) => {
                if defined.insert(*k) {
                    let name = if *k < 4 {
                        format!(".L{k}")
                    } else {
                        format!("{label_prefix}{k}")
                    };
                    out.push_str(&format!("{name}:\n"));
                }
            }
            Line::PopPc => out.push_str("\tpop\t{r7, pc}\n"),
            Line::Directive => out.push_str("\t.align\t2\n"),
            Line::Comment => out.push_str("\t@ comment\n"),
        }
    }
    out
}

proptest! {
    #[test]
    fn blocks_partition_program(lines in prop::collection::vec(line(), 0..40)) {
        let cfg = ParserConfig::default();
        let p = parse_assembly(&render(&lines, "unused"), &cfg).unwrap();
        let blocks = segment_basic_blocks(&p, &cfg);
        let joined: Vec<_> = blocks.iter().flat_map(|b| b.instructions.clone()).collect();
        prop_assert_eq!(&joined, &p.instructions);
        let mut next = 0;
        for b in &blocks {
            prop_assert!(!b.is_empty());
            prop_assert_eq!(b.start_index, next);
            prop_assert_eq!(b.end_index, b.start_index + b.len() - 1);
            next = b.end_index + 1;
            for insn in &b.instructions[..b.len() - 1] {
                prop_assert!(!cfg.is_branch(insn));
            }
        }
        // no branch target lands inside a block
        for insn in p.instructions.iter().filter(|i| cfg.is_branch(i)) {
            if let Some(&target) = p.labels.get(insn.operands_raw.as_str()) {
                prop_assert!(target == p.len() || blocks.iter().any(|b| b.start_index == target));
            }
        }
    }

    #[test]
    fn labels_index_within_bounds(lines in prop::collection::vec(line(), 0..40)) {
        let p = parse_assembly(&render(&lines, "u"), &ParserConfig::default()).unwrap();
        prop_assert!(p.labels.values().all(|&i| i <= p.len()));
    }

    #[test]
    fn line_endings_and_trailing_space(lines in prop::collection::vec(line(), 0..30)) {
        let cfg = ParserConfig::default();
        let unix = render(&lines, "u");
        let dos: String = unix.split('\n').map(|l| format!("{l}  \t")).collect::<Vec<_>>().join("\r\n");
        prop_assert_eq!(parse_assembly(&unix, &cfg).unwrap(), parse_assembly(&dos, &cfg).unwrap());
    }

    #[test]
    fn canonical_text_is_a_fixed_point(lines in prop::collection::vec(line(), 0..30)) {
        let cfg = ParserConfig::default();
        let once = parse_assembly(&render(&lines, "u"), &cfg).unwrap().to_canonical_text();
        let twice = parse_assembly(&once, &cfg).unwrap().to_canonical_text();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn ngrams_ignore_unreferenced_label_names(lines in prop::collection::vec(line(), 0..30)) {
        let cfg = ParserConfig::default();
        let a = parse_assembly(&render(&lines, "first"), &cfg).unwrap();
        let b = parse_assembly(&render(&lines, "second"), &cfg).unwrap();
        let fa = ProgramFeatures::extract(&a, &cfg, NgramMode::Blocks);
        let fb = ProgramFeatures::extract(&b, &cfg, NgramMode::Blocks);
        prop_assert_eq!(fa, fb);
    }

    #[test]
    fn feature_families_agree(lines in prop::collection::vec(line(), 0..40)) {
        let cfg = ParserConfig::default();
        let p = parse_assembly(&render(&lines, "u"), &cfg).unwrap();
        let f = ProgramFeatures::extract(&p, &cfg, NgramMode::Blocks);
        prop_assert_eq!(&f.existence, &f.frequency.keys());
        prop_assert_eq!(f.frequency.total(), p.len() as u64);
        for pat in f.patterns2.patterns.iter().chain(&f.patterns3.patterns) {
            for m in &pat.mnemonics {
                prop_assert!(f.existence.contains(m));
            }
        }
    }

    #[test]
    fn window_count_per_block(len in 1usize..30, n in 2usize..5) {
        let text: String = (0..len).map(|i| format!("\t{}\n", PLAIN[i % PLAIN.len()])).collect();
        let cfg = ParserConfig::default();
        let p = parse_assembly(&text, &cfg).unwrap();
        let blocks = segment_basic_blocks(&p, &cfg);
        prop_assert_eq!(blocks.len(), 1);
        let windows = blocks[0].instructions.windows(n).count();
        prop_assert_eq!(windows, len.saturating_sub(n - 1));
        // distinct patterns never exceed the window count
        prop_assert!(extract_ngrams(&blocks, n).unwrap().len() <= windows);
    }

    #[test]
    fn boolean_vector_round_trip(a in prop::collection::vec(line(), 0..30), b in prop::collection::vec(line(), 0..30)) {
        let cfg = ParserConfig::default();
        let fa = ProgramFeatures::extract(&parse_assembly(&render(&a, "u"), &cfg).unwrap(), &cfg, NgramMode::Blocks);
        let fb = ProgramFeatures::extract(&parse_assembly(&render(&b, "u"), &cfg).unwrap(), &cfg, NgramMode::Blocks);
        let u = build_universe(&[fa.patterns3.clone(), fb.patterns3.clone()]).unwrap();
        let bits = to_boolean_vector(&fa.patterns3, &u).unwrap();
        prop_assert_eq!(from_boolean_vector(&bits, &u).patterns, fa.patterns3.patterns);
    }

    #[test]
    fn subset_shapes(p in 2usize..8, a in 2usize..8) {
        let entries: Vec<ProgramEntry> = (0..a)
            .flat_map(|ai| (0..p).map(move |pi| ProgramEntry {
                id: format!("p{pi}a{ai}"),
                path: "x.s".into(),
                programmer: format!("p{pi}"),
                application: format!("a{ai}"),
            }))
            .collect();
        let grid = build_grid(&entries).unwrap();
        let apps = enumerate_subsets(&grid, GroupingScheme::ApplicationSpecific).unwrap();
        prop_assert_eq!(apps.len(), a);
        for s in &apps {
            prop_assert_eq!(s.members.len(), p);
            prop_assert!(s.members.iter().all(|m| m.application == s.members[0].application));
            let progs: BTreeSet<_> = s.members.iter().map(|m| &m.programmer).collect();
            prop_assert_eq!(progs.len(), p);
        }
        let progs = enumerate_subsets(&grid, GroupingScheme::ProgrammerSpecific).unwrap();
        prop_assert_eq!(progs.len(), p);
        for s in &progs {
            prop_assert!(s.members.iter().all(|m| m.programmer == s.members[0].programmer));
            let apps: BTreeSet<_> = s.members.iter().map(|m| &m.application).collect();
            prop_assert_eq!(apps.len(), a);
        }
        if p == a {
            for stride in admissible_strides(p) {
                let td = enumerate_subsets(&grid, GroupingScheme::TotallyDifferent { stride }).unwrap();
                let mut seen = BTreeSet::new();
                for s in &td {
                    let ps: BTreeSet<_> = s.members.iter().map(|m| &m.programmer).collect();
                    let as_: BTreeSet<_> = s.members.iter().map(|m| &m.application).collect();
                    prop_assert_eq!((ps.len(), as_.len()), (p, p));
                    for m in &s.members {
                        prop_assert!(seen.insert(m.id.clone()));
                    }
                }
                prop_assert_eq!(seen.len(), p * p);
            }
        }
    }
}

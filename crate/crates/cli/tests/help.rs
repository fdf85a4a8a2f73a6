use bibx_cli::Cli;
use clap::CommandFactory;

#[test]
fn every_subcommand_help_lists_all_flags() {
    let mut root = Cli::command();
    root.build();
    let globals: Vec<String> = root
        .get_arguments()
        .filter(|a| a.is_global_set())
        .filter_map(|a| a.get_long())
        .map(|l| format!("--{l}"))
        .collect();
    let names: Vec<String> = root.get_subcommands().map(|s| s.get_name().to_string()).filter(|n| n != "help").collect();
    assert_eq!(names.len(), 21, "{names:?}");
    for sub in root.get_subcommands_mut().filter(|s| s.get_name() != "help") {
        let name = sub.get_name().to_string();
        let longs: Vec<String> = sub.get_arguments().filter_map(|a| a.get_long()).map(|l| format!("--{l}")).collect();
        let help = sub.render_long_help().to_string();
        for flag in longs.iter().chain(&globals) {
            assert!(help.contains(flag.as_str()), "`{name} --help` does not mention {flag}");
        }
    }
}

#[test]
fn help_flag_exits_zero_on_stdout() {
    for cmd in ["ingest", "merge", "filter", "report", "similarity", "ask", "export"] {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = bibx_cli::run_with(["bibx", cmd, "--help"], &mut out, &mut err);
        assert_eq!(code, 0);
        assert!(String::from_utf8(out).unwrap().contains("Usage: bibx"), "{cmd}");
        assert!(err.is_empty());
    }
}

// Drive the command line in memory: generate, pack, verify, render.

use std::error::Error;

use anchorpack::cli::run;

fn call(args: &[&str], input: &str) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["anchorpack"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut input.as_bytes(), &mut out, &mut std::io::sink());
    (code, String::from_utf8(out).expect("utf-8"))
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (code, instance) = call(&["gen", "--family", "prop1", "--n", "3"], "");
    assert_eq!(code, 0);
    let (code, packing) = call(&["pack", "--algo", "strip712"], &instance);
    assert_eq!(code, 0);
    let (code, report) = call(&["verify"], &packing);
    print!("{report}");
    assert_eq!(code, 0);
    let (code, svg) = call(&["render"], &packing);
    assert_eq!(code, 0);
    println!("svg: {} bytes", svg.len());
    let (code, _) = call(&["oracle"], "{ not json");
    assert_eq!(code, 3);
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}

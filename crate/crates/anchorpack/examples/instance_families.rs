// Every generator family, written as JSON.

use std::error::Error;

use anchorpack::generators::{default_eps, gen, Family, GenParams};
use anchorpack::io::{parse_instance, write_instance};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for family in Family::ALL {
        let params = GenParams { n: Some(4), eps: default_eps(family), seed: 1, ..Default::default() };
        let inst = gen(family, &params)?;
        let text = write_instance(&inst);
        assert_eq!(parse_instance(&text, true)?, inst);
        let pts: Vec<String> = inst.points.iter().map(|p| p.to_string()).collect();
        println!("{family:9} {}", pts.join(" "));
    }
    Ok(())
}

fn main() {
    run_example().expect("example failed");
}

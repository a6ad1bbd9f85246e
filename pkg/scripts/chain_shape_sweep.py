#!/usr/bin/env python3
"""Sweep GHZ chain shapes over qubit count and compare compiled cost.

Emits one CSV row per (n, chain) with LD/ST counts, makespan, and fidelity,
for offline plotting of the crossover between the log-depth parallel tree and
the movement-friendly fountain chain.
"""

import click

from zonec.arch import MachineConfig, build_layout
from zonec.cost import breakdown, fidelity
from zonec.frontend import gen_ghz
from zonec.rewrite import PipelineOptions, mantra_pipeline
from zonec.scheduler import count_ld_st, schedule


@click.command()
@click.option("--sizes", default="8,16,24,32,48,64,80,100",
              show_default=True, help="comma-separated qubit counts")
@click.option("--chains", default="fountain,parallel,path", show_default=True)
@click.option("--mode", type=click.Choice(["mantra", "standard"]),
              default="mantra", show_default=True)
def main(sizes, chains, mode):
    cfg = MachineConfig()
    click.echo("n,chain,loads,stores,makespan_us,load_store_us,shuttling_us,fidelity")
    for n in (int(s) for s in sizes.split(",")):
        for chain in chains.split(","):
            prog = mantra_pipeline(gen_ghz(n, chain=chain),
                                   PipelineOptions(mode=mode))
            tl = schedule(prog, build_layout(cfg, n), cfg)
            loads, stores = count_ld_st(tl)
            bd = breakdown(tl)
            fr = fidelity(tl, prog.flatten(), cfg)
            click.echo(
                f"{n},{chain},{loads},{stores},{bd.makespan_us:.1f},"
                f"{bd.load_store_us:.1f},{bd.shuttling_us:.1f},{fr.total:.6f}"
            )


if __name__ == "__main__":
    main()

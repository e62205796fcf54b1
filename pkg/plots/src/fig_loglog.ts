import { figLogLog } from "./figures";
import { runCli } from "./cli";

runCli("fig_loglog", ["summary.csv"], figLogLog);

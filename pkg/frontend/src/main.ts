import { TrialApi } from "./api.js";
import { Console } from "./ui.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");
new Console(new TrialApi(""), root).start();

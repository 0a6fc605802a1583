import { ApiClient } from "./api.js";
import { App } from "./view.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app element");

void new App(new ApiClient(baseUrl), window.localStorage, root).start();

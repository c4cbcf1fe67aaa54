/** Entry point: wire the real fetch, clipboard, and DOM together. */

import { ApiClient } from "./api.js";
import { mount } from "./dom.js";
import { Store } from "./store.js";
import { Workbench } from "./workbench.js";

const api = new ApiClient("");
const store = new Store();
const workbench = new Workbench(api, store, navigator.clipboard);

mount(workbench, store);

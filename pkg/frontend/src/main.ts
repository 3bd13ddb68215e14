import { mountPlayboard } from "./app.js";

// ?api=http://host:port overrides the default service location
const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? "http://localhost:8080";

const root = document.getElementById("app");
if (root) mountPlayboard(root, base);

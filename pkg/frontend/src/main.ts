import { HttpScoreboardApi } from "./api.js";
import { initScoreboard } from "./app.js";

document.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("app");
  if (root) {
    initScoreboard(root, new HttpScoreboardApi());
  }
});

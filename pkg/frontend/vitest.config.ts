import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    // The end-to-end suite spawns a real advice service and synthesizes
    // advisers for every bundled fixture, so leave generous headroom.
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});

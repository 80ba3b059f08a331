import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    include: ["tests/**/*.test.ts"],
    // The live suite boots a real service process; give it headroom.
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});

import { defineConfig } from "vitest/config";

export default defineConfig({
  server: {
    proxy: {
      // dev convenience: forward API calls to a locally running PACS
      "/v1": "http://127.0.0.1:8042",
    },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
  },
});

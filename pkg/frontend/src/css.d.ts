declare module "*.css" {
  const nothing: Record<string, never>;
  export default nothing;
}

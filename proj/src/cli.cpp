namespace winter {}

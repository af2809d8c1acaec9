package main

func main() {
	// Open the URL of the repository
	url := "github.com/"
}
